import sys

from polychrome.cli import main

sys.exit(main())
