"""On-disk cache of O_W(M) spans.

One text file per (d, module, W), named by a hash of those values and the
basis-order version.  The body has one row-reduced vector per line in
canonical monomial text with rational coefficients, terms separated by
" ; ".  The header records a hash of the body.  A loaded span is trusted
only after five products a o u, recomputed from scratch, reduce to zero
against it.
"""

from __future__ import annotations

import hashlib
import logging
import os
from fractions import Fraction
from pathlib import Path

from .fock import basis_sort_key, monomial_text, parse_monomial
from .linalg import Span

log = logging.getLogger(__name__)

BASIS_ORDER_VERSION = 1
CACHE_ENV = "SFVOA_CACHE_DIR"
SPOT_CHECKS = 5


def cache_key(d: int, tag_label: str, W) -> str:
    text = f"d={d};module={tag_label};W={Fraction(W)};order=v{BASIS_ORDER_VERSION}"
    return hashlib.sha256(text.encode()).hexdigest()[:20]


def encode_row(row: dict, sector: str, d: int) -> str:
    items = sorted(row.items(), key=lambda kv: basis_sort_key(kv[0]), reverse=True)
    return " ; ".join(f"{c}*{monomial_text(m, sector, d)}" for m, c in items)


def decode_row(line: str) -> dict:
    row = {}
    for part in line.split(" ; "):
        coeff, text = part.split("*", 1)
        _, sign, mono = parse_monomial(text)
        if mono is None or sign == 0:
            raise ValueError(f"bad monomial {text!r}")
        row[mono] = row.get(mono, 0) + sign * Fraction(coeff)
    return row


class BasisCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        directory = directory or os.environ.get(CACHE_ENV) or ".sfvoa-cache"
        self.dir = Path(directory)
        self.hits = 0
        self.rebuilds = 0

    def path(self, d, tag_label, W) -> Path:
        return self.dir / f"O-{tag_label}-W{str(Fraction(W)).replace('/', '_')}-d{d}-{cache_key(d, tag_label, W)}.txt"

    def save(self, d: int, tag, W, span: Span):
        self.dir.mkdir(parents=True, exist_ok=True)
        pivots = sorted(span.rows, key=basis_sort_key)
        body = "\n".join(encode_row(span.rows[p], tag.sector, d) for p in pivots)
        digest = hashlib.sha256(body.encode()).hexdigest()
        header = f"# O-basis module={tag.label} W={Fraction(W)} d={d} order=v{BASIS_ORDER_VERSION} rows={len(pivots)} sha256={digest}"
        self.path(d, tag.label, W).write_text(header + "\n" + body + ("\n" if body else ""))

    def load(self, d: int, tag, W, spot_check) -> Span | None:
        """Cached span, or None when absent or failing verification.

        ``spot_check(span, count)`` must return True iff ``count``
        recomputed products reduce to zero against ``span``.
        """
        p = self.path(d, tag.label, W)
        if not p.exists():
            return None
        try:
            lines = p.read_text().split("\n")
            header = lines[0]
            body = "\n".join(l for l in lines[1:] if l)
            fields = dict(f.split("=", 1) for f in header.lstrip("# ").split()[1:])
            if hashlib.sha256(body.encode()).hexdigest() != fields["sha256"]:
                raise ValueError("body hash mismatch")
            span = Span(basis_sort_key)
            for line in body.split("\n") if body else []:
                row = decode_row(line)
                top = max(row, key=basis_sort_key)
                if row[top] != 1 or top in span.rows:
                    raise ValueError("row is not in echelon form")
                span.rows[top] = row
            if len(span) != int(fields["rows"]):
                raise ValueError("row count mismatch")
            if not spot_check(span, SPOT_CHECKS):
                raise ValueError("spot check failed")
        except (ValueError, KeyError, IndexError) as exc:
            log.warning("cache file %s rejected (%s); rebuilding", p, exc)
            self.rebuilds += 1
            return None
        self.hits += 1
        return span
