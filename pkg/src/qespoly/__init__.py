"""Exact construction and verification of quasi-exactly-solvable operators.

Modules, bottom up: ``exactnum`` (rationals, one adjoined square root,
polynomials), ``weylop`` (normal-ordered differential operators),
``transforms`` (gauge and variable changes), ``spaces`` (invariant spaces
and restriction matrices), ``catalog`` (operator families and relations),
``hamiltonians`` (the physical systems), ``recurrence`` (three-term
recurrences and truncation), ``numverify`` (floating-point cross-checks)
and ``cli``.
"""

__version__ = "0.1.0"
