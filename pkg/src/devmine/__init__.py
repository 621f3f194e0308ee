"""devmine: business-process deviance mining.

Pipeline: parse labeled event logs, discover sequential / declarative / data
features, select by Fisher score + coverage, encode traces, train white-box
rule learners (decision tree, RIPPER), evaluate with stratified CV.
"""

__version__ = "0.1.0"
