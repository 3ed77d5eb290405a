"""
Policy constants (tuning separated from core logic).
"""

# Progress logging intervals
SUBSET_LOG_EVERY = 25  # ntw_fixed_k: log every N candidate subsets
FLOW_CASE_LOG_EVERY = 200  # ptw/pts: log every N (set, score) cases
ORACLE_LOG_EVERY = 100_000  # oracle: log every N enumerated completions

# Score spaces kept for reuse across k-subset queries on the same instance
SPACE_CACHE_SIZE = 64

# Brute-force limit for the source problems of the generators
NP_SOURCE_MAX_SIZE = 20
