"""Stabilizer-code ingestion: signed Pauli words to an exact code projector.

Generators are read one per line (``#`` starts a comment) or comma-separated.
The projector is ``Π_g (1 + g) / 2``, which equals the normalized sum over the
stabilizer group when the generators commute and are independent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import StabilizerError
from .gaussian import GaussianRationalArray
from .hilbert import CodeStates, Factorization, Operator
from .pauli import LETTERS, PauliError

_WORD = re.compile(r"^([+-]?)([A-Za-z]+)$")


@dataclass(frozen=True)
class SignedPauli:
    sign: int
    error: PauliError

    @classmethod
    def parse(cls, text: str) -> "SignedPauli":
        m = _WORD.match(text.strip())
        if not m:
            raise StabilizerError(f"cannot parse Pauli word {text!r}")
        letters = m.group(2).upper()
        bad = sorted(set(letters) - set(LETTERS))
        if bad:
            raise StabilizerError(f"bad character {bad[0]!r} in Pauli word {text!r}")
        return cls(-1 if m.group(1) == "-" else 1, PauliError(letters))

    @property
    def n(self) -> int:
        return self.error.n

    def symplectic(self) -> tuple[int, int]:
        x = z = 0
        for i, c in enumerate(self.error.letters):
            if c in "XY":
                x |= 1 << i
            if c in "ZY":
                z |= 1 << i
        return x, z

    def commutes_with(self, other: "SignedPauli") -> bool:
        x1, z1 = self.symplectic()
        x2, z2 = other.symplectic()
        return ((x1 & z2).bit_count() + (z1 & x2).bit_count()) % 2 == 0

    def __str__(self):
        return ("-" if self.sign < 0 else "") + self.error.letters


@dataclass(frozen=True)
class StabilizerGroup:
    n: int
    generators: tuple[SignedPauli, ...]

    @classmethod
    def parse(cls, text: str) -> "StabilizerGroup":
        words = []
        for line in text.splitlines():
            line = line.split("#", 1)[0]
            words.extend(w for w in (p.strip() for p in line.split(",")) if w)
        if not words:
            raise StabilizerError("no generators given")
        gens = tuple(SignedPauli.parse(w) for w in words)
        lengths = {g.n for g in gens}
        if len(lengths) != 1:
            raise StabilizerError(f"generators have unequal lengths {sorted(lengths)}")
        group = cls(lengths.pop(), gens)
        group.validate()
        return group

    def validate(self):
        gens = self.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not gens[i].commutes_with(gens[j]):
                    raise StabilizerError(
                        f"generators {i + 1} ({gens[i]}) and {j + 1} ({gens[j]}) anticommute"
                    )
        # GF(2) elimination on the (x|z) rows, remembering which generators were combined
        pivots: dict[int, int] = {}
        for k, g in enumerate(gens):
            x, z = g.symplectic()
            row = x | (z << self.n)
            while row:
                top = row.bit_length() - 1
                if top not in pivots:
                    pivots[top] = row
                    break
                row ^= pivots[top]
            else:
                raise StabilizerError(
                    f"generator {k + 1} ({g}) is dependent on the preceding generators"
                )

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def K(self) -> int:
        return 2 ** (self.n - self.num_generators)

    def projector(self) -> Operator:
        """``Π_g (1 + g)/2`` exactly; each factor is applied as a signed column permutation."""
        fact = Factorization.qubits(self.n)
        d = fact.total_dim
        P = GaussianRationalArray.identity(d)
        cols = np.arange(d)
        parity = np.array([bin(c).count("1") & 1 for c in range(d)])
        for g in self.generators:
            x, z, ny = g.error._bits()
            # g|c> = sign · i^nY (-1)^{|c & z|} |c ^ x>, so (P g)[:, c] = that phase times P[:, c ^ x]
            s = g.sign * (1 - 2 * parity[cols & z])
            src = cols ^ x
            re, im = P.re[:, src], P.im[:, src]
            k = ny % 4
            if k == 0:
                gre, gim = re, im
            elif k == 1:
                gre, gim = -im, re
            elif k == 2:
                gre, gim = -re, -im
            else:
                gre, gim = im, -re
            sgn = s.astype(object)[None, :]
            P = GaussianRationalArray(P.re + gre * sgn, P.im + gim * sgn, 2 * P.den)
        return Operator(fact, P)

    def projector_by_products(self) -> Operator:
        """Same projector through dense exact matrix products (slow; a cross-check)."""
        fact = Factorization.qubits(self.n)
        d = fact.total_dim
        P = GaussianRationalArray.identity(d)
        eye = GaussianRationalArray.identity(d)
        for g in self.generators:
            E = g.error.matrix(exact=True).entries * g.sign
            P = P @ ((eye + E) / 2)
        return Operator(fact, P)


def parse_stabilizer(text: str) -> CodeStates:
    """Build a code from stabilizer generators; codewords are a canonical Gram-Schmidt basis of the projector's columns."""
    group = StabilizerGroup.parse(text)
    P = group.projector()
    if P.trace() != group.K:
        raise StabilizerError(f"projector has trace {P.trace()}, expected {group.K}")
    return CodeStates.from_projector(P, method="columns")
