import os
from dataclasses import dataclass

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


@dataclass
class Config:
    """Configuration settings for the poset verifier"""

    # Logging
    LOG_LEVEL: str = os.getenv("POSET_LOG_LEVEL", "INFO")

    # Finite topology search caps (exponential search, desk scale)
    MAX_SEARCH_POINTS: int = int(os.getenv("POSET_MAX_SEARCH_POINTS", "6"))
    MAX_SEARCH_BASE: int = int(os.getenv("POSET_MAX_SEARCH_BASE", "14"))

    # Simulation
    SIM_BUDGET: int = int(os.getenv("POSET_SIM_BUDGET", "10000"))  # extension steps

    # Fuzz campaign defaults
    FUZZ_MAX_POINTS: int = int(os.getenv("POSET_FUZZ_MAX_POINTS", "6"))  # per side
    FUZZ_MAX_DEPTH: int = int(os.getenv("POSET_FUZZ_MAX_DEPTH", "4"))
    FUZZ_UNIVERSE: int = int(os.getenv("POSET_FUZZ_UNIVERSE", "64"))
    FUZZ_TRIALS: int = int(os.getenv("POSET_FUZZ_TRIALS", "100"))
    SHRINK_MAX_STEPS: int = int(os.getenv("POSET_SHRINK_MAX_STEPS", "500"))


config = Config()
