import sys

from qpprng.cli import main

sys.exit(main())
