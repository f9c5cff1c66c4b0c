"""
semlab - emulating denotational semantics from assertion queries.

Toy languages, an assertion oracle that answers relation queries about them,
emulators that rebuild a representation from those answers, and an adversary
that shows where that breaks down.
"""

import sys

# Numerals are unbounded naturals; lift the str<->int digit cap where the interpreter has one.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)
