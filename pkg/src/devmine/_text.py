"""Token quoting shared by the canonical text forms (constraints, patterns)."""

import re

_BARE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_:.\-]*$")


def quote(token: str) -> str:
    if _BARE.match(token):
        return token
    return '"' + token.replace("\\", "\\\\").replace('"', '\\"') + '"'


def split_args(text: str, sep: str = ",") -> list:
    """Split on `sep` at depth zero, honoring double-quoted segments."""
    parts = []
    buf = []
    in_quote = False
    escaped = False
    for ch in text:
        if escaped:
            buf.append(ch)
            escaped = False
        elif ch == "\\" and in_quote:
            escaped = True
        elif ch == '"':
            in_quote = not in_quote
            buf.append(ch)
        elif ch == sep and not in_quote:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf))
    return parts


def unquote(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == '"' and token[-1] == '"':
        body = token[1:-1]
        return body.replace('\\"', '"').replace("\\\\", "\\")
    return token
