"""toursid: a workbench for Sidorenko-type inequalities in tournaments.

Pattern-side objects (oriented paths, cycles, trees) live in `core`, hosts
(tournaments, weighted tournaments, skew matrices) in `tournament`.  On top
of those: homomorphism counting (`hom`), signed subgraph counts (`signed`),
the local classification algorithms (`classify`), polynomial expansion and
the mechanical sign certifier (`spectral`), explicit kernels and
counterexample certificates (`construct`), tree orientations (`trees`), the
two-state homomorphism chain and Lyapunov estimation (`stochastic`), and
refutation search (`search`).  `cli` exposes everything as subcommands.
"""

__version__ = "0.1.0"
