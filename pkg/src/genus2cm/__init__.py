"""Explicit CM theory for principally polarized abelian surfaces.

Subpackages cover, bottom up: exact linear algebra and series
(`exactalg`, `series`), finite field towers (`ffield`), quartic CM fields
with class groups and the polarized class group (`quartic`, `classgroup`,
`shimura`, `realquad`), theta expansions and (3,3)-relation mining
(`theta`), invariant conversions (`invariants`), genus-2 curves over finite
fields (`curves`), isogeny computation (`isogeny`, `solver`), and the
Igusa class polynomial / isogeny graph pipeline (`pipeline`, `cli`).
"""

__version__ = "0.1.0"
