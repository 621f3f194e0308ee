"""Sequence-scan kernels with an optional compiled fast path.

``_speedups`` (Cython) is used when built; otherwise the pure-Python
reference ``_pyimpl`` takes over. Both expose the same four functions with
identical semantics; ``scripts/bench_kernels.py`` compares their speed.
"""

try:
    from devmine.kernels import _speedups as _impl

    HAVE_SPEEDUPS = True
except ImportError:  # extension not built
    from devmine.kernels import _pyimpl as _impl

    HAVE_SPEEDUPS = False

from devmine.kernels import _pyimpl as pyimpl

count_occurrences = _impl.count_occurrences
count_window_occurrences = _impl.count_window_occurrences
tandem_runs = _impl.tandem_runs
window_tandem_runs = _impl.window_tandem_runs

__all__ = [
    "HAVE_SPEEDUPS",
    "count_occurrences",
    "count_window_occurrences",
    "tandem_runs",
    "window_tandem_runs",
    "pyimpl",
]
