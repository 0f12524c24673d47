"""Error taxonomy shared by the library and the command line.

ValidationError covers malformed descriptors, inconsistent inputs and
precondition failures (CLI exit code 2).  BudgetError covers configured
resource limits being hit: order bounds, orbit caps, search caps (exit 3).
"""

from __future__ import annotations


class ValidationError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass
