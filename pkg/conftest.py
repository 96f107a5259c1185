import sys
from pathlib import Path

# Packages live at the repository root (models/, optics/, stats/, ...)
sys.path.insert(0, str(Path(__file__).resolve().parent))
