import os
import sys

from dotenv import load_dotenv

# Load environment variables before the settings module is imported
load_dotenv()

# Add the current directory to the path to ensure imports work correctly
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from app.cli import run_cli  # noqa: E402

if __name__ == "__main__":
    sys.exit(run_cli())
