import os
from pathlib import Path

# Base directories
BASE_DIR = Path(__file__).parent
OUTPUT_DIR = Path(os.getenv("OMEGABAR_OUTPUT_DIR", str(BASE_DIR / "output")))

LOG_LEVEL = os.getenv("OMEGABAR_LOG_LEVEL", "WARNING").upper()

# Feasibility caps (overridable from the command line with --cap-*)
FEASIBILITY_CAPS = {
    'nonzero_vectors': 4096,
    'group_order': 25000,
    'graded_dim': 2000,
    'brute_force': 2 ** 20,
}
MAX_NONZERO_VECTORS = FEASIBILITY_CAPS['nonzero_vectors']
MAX_GROUP_ORDER = FEASIBILITY_CAPS['group_order']
MAX_GRADED_DIM = FEASIBILITY_CAPS['graded_dim']
MAX_BRUTE_FORCE = FEASIBILITY_CAPS['brute_force']
MAX_FIELD_SIZE = 2 ** 20

# Graded-piece linear algebra
EVAL_FIELD_MIN_SIZE = 4096
EVAL_EXTRA_POINTS = 16
NUMERATOR_SUPPORT_CAP = 120

# Sampling
DEFAULT_SEED = 1729
DEFAULT_SAMPLES = 500

# Output
OUTPUT_FORMATS = ["text", "json", "csv"]

VARIETIES = ["P", "Q", "B", "Omega"]

VERIFY_SUITES = [
    "relations",
    "freeness",
    "invariants",
    "dickson",
    "dualizing",
    "strange-maps",
    "strata",
    "charts",
    "singular-locus",
    "cohomology-identity",
    "boundary-orders",
]
