"""Practical size limits.  These are configuration, not theory."""
import os

MAX_RANK = int(os.environ.get("HEREDPOLY_MAX_RANK", 6))
MAX_FLAGS = int(os.environ.get("HEREDPOLY_MAX_FLAGS", 2**20))
# two_power refuses more base vertices than this unless overridden per call
MAX_TWO_POWER_VERTICES = 16
# hereditary tests enumerate the whole section group up to this order
FULL_SECTION_GROUP_LIMIT = 10**4
