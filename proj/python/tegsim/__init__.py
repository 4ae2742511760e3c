"""Deterministic simulator and analysis toolkit for token-ledger networks.

Everything lives in the compiled core; this package re-exports it. The same
seed produces bit-identical numbers here and in the command-line tool.
"""

from tegsim._core import *  # noqa: F401,F403
