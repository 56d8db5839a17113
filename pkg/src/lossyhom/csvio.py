"""Deterministic CSV text emission: header row, LF endings, 12 significant digits."""

import numbers


def fmt(value):
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        text = f"{float(value):.12g}"
        return "0" if text == "-0" else text
    return str(value)


def to_csv(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
