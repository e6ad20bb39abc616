"""jsalg: exact-arithmetic Jordan superalgebras, generalized Poisson brackets
and the short-grading / TKK verification toolkit."""

__version__ = "0.1.0"
