import sys

from picard.cli import main

sys.exit(main())
