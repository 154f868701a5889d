"""Environment-backed defaults.

Values are read once at import time, after loading an optional ``.env`` file
from the working directory.
"""

import os

from dotenv import load_dotenv

load_dotenv()

# Fixed so that runs without --seed are reproducible.
DEFAULT_SEED = int(os.getenv("KMJACK_SEED", "20130917"))
DEFAULT_THREADS = int(os.getenv("KMJACK_THREADS", "1"))
DEFAULT_REPLICATIONS = int(os.getenv("KMJACK_REPLICATIONS", "10000"))
DEFAULT_OUT_DIR = os.getenv("KMJACK_OUT_DIR", "results")

# Replication scale of the Koziol-Green tables.
MAX_REPLICATIONS = 100_000
