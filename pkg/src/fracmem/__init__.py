"""fracmem: fading-memory kernels, fractional-order operators and
growth dynamics with memory.

The package provides

- a catalog of memory kernels M(t, tau) with property probes
  (fading, time-homogeneity, unit preservation),
- multiplier and accelerator operators driven by those kernels, including
  Riemann-Liouville integrals, Caputo derivatives, Kober/Erdelyi-Kober
  operators, variable-order and distributed-order operators,
- closed-form impulse/step response oracles,
- the discrete multiplier map with power-law memory,
- the Harrod-Domar growth model with power-law memory (closed-form
  Mittag-Leffler solutions, a fractional predictor-corrector solver,
  asymptotics and growth-rate analysis),
- a scenario-running CLI (``fracmem``) emitting CSV and optional figures.
"""

__version__ = "0.1.0"
