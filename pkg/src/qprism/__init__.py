"""Exact-arithmetic verification engine for q-deformed calculus.

Subpackages cover: exact polynomial identities (exactcore), capped
precision p-adic and power-series arithmetic (padic), truncated Witt
vectors and ghost-coordinate solving (witt), twisted Ore algebras with
normal-form rewriting (ore), module cohomology of q-connections
(crystal), the unit-group descent computations (descent), and the batch
verification harness (suites, cli).
"""

__version__ = "0.1.0"
