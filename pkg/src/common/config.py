"""Process-level settings for afford3d.

Loads environment variables (optionally from a .env file).
"""

import os
from dotenv import load_dotenv

# Load .env file if it exists
load_dotenv()


class Config:
    """Configuration singleton for process-level settings."""

    # Evaluation parallelism cap
    THREADS: int = int(os.getenv("AFFORD3D_THREADS", "1"))

    # Root log level
    LOG_LEVEL: str = os.getenv("AFFORD3D_LOG_LEVEL", "INFO")

    @classmethod
    def eval_threads(cls) -> int:
        """Return the evaluation worker cap, re-reading the environment.

        Returns:
            Number of worker threads (at least 1)
        """
        raw = os.getenv("AFFORD3D_THREADS", str(cls.THREADS))
        try:
            return max(1, int(raw))
        except ValueError:
            return 1
