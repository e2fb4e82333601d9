"""
Configuration settings for the NCG toolkit
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

class Settings:
    """Application settings and configuration"""

    # Base paths
    BASE_DIR = Path(__file__).parent.parent.parent
    DATA_DIR = Path(os.getenv("NCG_DATA_DIR", str(BASE_DIR / "data")))

    # Numerical tolerances (abs 1e-10 / rel 1e-8 give double-precision headroom up to dim 512)
    TOL_ABS = float(os.getenv("NCG_TOL_ABS", "1e-10"))
    TOL_REL = float(os.getenv("NCG_TOL_REL", "1e-8"))
    MAX_QL_ITERATIONS = int(os.getenv("NCG_MAX_QL_ITERATIONS", "60"))

    # Sampling defaults
    DEFAULT_SEED = int(os.getenv("NCG_DEFAULT_SEED", "0"))
    DEFAULT_SCALE = float(os.getenv("NCG_DEFAULT_SCALE", "1.0"))

    # Batch settings
    JOBS = int(os.getenv("NCG_JOBS", "1"))

    # File format
    FILE_VERSION = 1

    # Logging settings
    LOG_LEVEL = os.getenv("NCG_LOG", "info")
    LOG_FILE = Path(os.getenv("NCG_LOG_FILE", str(DATA_DIR / "logs" / "ncg.log")))

    # Create logs directory
    LOG_FILE.parent.mkdir(parents=True, exist_ok=True)

# Global settings instance
settings = Settings()
