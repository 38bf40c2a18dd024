"""Reading and writing ``.rsrl`` spec files.

The format is line oriented; ``#`` starts a comment::

    sigma: a b c d
    delta:
      Sstar := (a + b + c + d)*
      Sa := a
    K: Sstar Sa Sstar
    R: (a + b + c + d)* a (a + b + c + d)*

``R`` is optional.  Query text (``R`` or a CLI ``--query``) may use meta
symbol names as shorthand for their images.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import AlphabetError, RegexSyntaxError, RsrlError, SpecFileError, UndeclaredSymbolError, ValidationError
from .ops import Rsrl
from .regex import Alphabet, Regex, nullable, parse_regex, substitute, symbols, to_text
from .substitution import Substitution

_KEY = re.compile(r"^(sigma|delta|K|R)\s*:(.*)$")
_DECL = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*:=(.*)$")


@dataclass(frozen=True)
class SpecFile:
    rsrl: Rsrl
    query: Regex | None = None


def _regex_at(text: str, alphabet, line: int, column: int) -> Regex:
    try:
        return parse_regex(text, alphabet)
    except RegexSyntaxError as e:
        raise SpecFileError(str(e), line, column + e.position) from None
    except UndeclaredSymbolError as e:
        raise SpecFileError(str(e), line, column) from None


def parse_query(text: str, phi: Substitution) -> Regex:
    """Query over the base alphabet; meta names expand to their images."""
    r = parse_regex(text, tuple(phi.sigma) + tuple(phi.delta))
    used = symbols(r) & set(phi.delta)
    if not used:
        return r
    mapping = {s: s for s in phi.sigma}
    mapping.update({d: img for d, img in phi.items()})
    return substitute(r, mapping)


def parse_spec_text(text: str) -> SpecFile:
    sigma: Alphabet | None = None
    decls: dict[str, tuple[str, int, int]] = {}
    k_src = r_src = None
    in_delta = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip().rstrip("\r")
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        m = _KEY.match(body)
        if m:
            key, value = m.group(1), m.group(2)
            col = indent + m.start(2) + 1 + (len(value) - len(value.lstrip()))
            value = value.strip()
            in_delta = key == "delta"
            if key == "sigma":
                try:
                    sigma = Alphabet.of(value.split(), "base")
                except AlphabetError as e:
                    raise SpecFileError(str(e), lineno, col) from None
            elif key == "delta":
                if value:
                    raise SpecFileError("declarations go on the lines after 'delta:'", lineno, col)
            elif key == "K":
                k_src = (value, lineno, col)
            else:
                r_src = (value, lineno, col)
            continue
        d = _DECL.match(body)
        if d and in_delta:
            name = d.group(1)
            if name in decls:
                raise SpecFileError(f"meta symbol {name!r} declared twice", lineno, indent + 1)
            value = d.group(2)
            col = indent + d.start(2) + 1 + (len(value) - len(value.lstrip()))
            decls[name] = (value.strip(), lineno, col)
            continue
        raise SpecFileError(f"cannot parse line {body!r}", lineno, indent + 1)

    if sigma is None:
        raise SpecFileError("missing 'sigma:' declaration", 1)
    if k_src is None:
        raise SpecFileError("missing 'K:' declaration", 1)
    images = {}
    for name, (src, lineno, col) in decls.items():
        if name in sigma:
            raise SpecFileError(f"meta symbol {name!r} reuses a base symbol name (alphabets must be disjoint)", lineno, 1)
        images[name] = _regex_at(src, sigma, lineno, col)
    try:
        phi = Substitution.from_mapping(sigma, images)
    except AlphabetError as e:
        raise SpecFileError(str(e), 1) from None
    k = _regex_at(k_src[0], phi.delta, k_src[1], k_src[2])
    if nullable(k):
        raise SpecFileError("the generator K contains the empty word (must have ε ∉ L(K))", k_src[1], k_src[2])
    query = None
    if r_src is not None:
        try:
            query = parse_query(r_src[0], phi)
        except RegexSyntaxError as e:
            raise SpecFileError(str(e), r_src[1], r_src[2] + e.position) from None
        except UndeclaredSymbolError as e:
            raise SpecFileError(str(e), r_src[1], r_src[2]) from None
    try:
        rsrl = Rsrl(k, phi)
    except ValidationError as e:
        raise SpecFileError(str(e), k_src[1], k_src[2]) from None
    return SpecFile(rsrl, query)


def parse_spec(path) -> tuple[Rsrl, Regex | None]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise RsrlError(f"cannot read spec file {path}: {e.strerror}") from None
    spec = parse_spec_text(text)
    return spec.rsrl, spec.query


def dump_spec(r: Rsrl, query: Regex | None = None) -> str:
    lines = [f"sigma: {' '.join(r.sigma)}", "delta:"]
    lines += [f"  {d} := {to_text(img)}" for d, img in r.phi.items()]
    lines.append(f"K: {to_text(r.k)}")
    if query is not None:
        lines.append(f"R: {to_text(query)}")
    return "\n".join(lines) + "\n"


def write_spec(path, r: Rsrl, query: Regex | None = None) -> None:
    Path(path).write_text(dump_spec(r, query), encoding="utf-8")
