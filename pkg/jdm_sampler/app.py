"""Console-script entry point.

Delegates to the argparse front end in the presentation layer.
"""

import sys
from typing import List, Optional

from .presentation.cli import main as cli_main


def main(argv: Optional[List[str]] = None) -> int:
    """Run the jdm-sampler command line.

    Args:
        argv: Arguments without the program name; defaults to sys.argv

    Returns:
        Process exit code
    """
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
