"""Centralized configuration and logging for qmemsim."""

import os
import logging

from dotenv import load_dotenv

# Paths
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
load_dotenv(os.path.join(BASE_DIR, ".env"))

DATA_DIR = os.environ.get("QMEMSIM_DATA_DIR", os.path.join(BASE_DIR, "data"))

# Execution: a batch is the unit of work handed to a worker. Results depend on
# the batch size (echoed into summary.json) but never on the worker count.
WORKERS = int(os.environ.get("QMEMSIM_WORKERS", "1"))
BATCH_SIZE = int(os.environ.get("QMEMSIM_BATCH_SIZE", "128"))

# Analysis thresholds
MEMORY_RATIO_LIMIT = float(os.environ.get("QMEMSIM_MEMORY_RATIO_LIMIT", "0.1"))
AREA_TOLERANCE = float(os.environ.get("QMEMSIM_AREA_TOLERANCE", "0.20"))
CURVE_TOLERANCE = float(os.environ.get("QMEMSIM_CURVE_TOLERANCE", "0.15"))

# Logging
LOG_LEVEL = os.environ.get("QMEMSIM_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_FILE = os.environ.get("QMEMSIM_LOG_FILE", os.path.join(BASE_DIR, "qmemsim.log"))

logging.basicConfig(
    level=LOG_LEVEL,
    format=LOG_FORMAT,
    handlers=[logging.FileHandler(LOG_FILE), logging.StreamHandler()],
)

logger = logging.getLogger("qmemsim")
