"""Desk-scale resource limits.

All recursive constructions and searches take an explicit `Limits` (or a
field of one) so that callers can widen or narrow them; the defaults keep
every property suite comfortably interactive.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    tower_depth: int = 6          # direct-limit levels of iterated lamp groups
    theta_depth: int = 3          # iterations of the HNN-extension operator
    wreath_depth: int = 4         # nesting of restricted wreath layers
    desc_depth: int = 16          # sanity cap on group-description trees
    coset_limit: int = 100_000    # default Todd-Coxeter coset allocation
    verbal_order_cap: int = 10_000   # largest finite group closed for word values
    low_index_nodes: int = 10_000_000  # backtracking node budget


DEFAULT_LIMITS = Limits()
