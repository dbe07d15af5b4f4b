import sys

from rkaczmarz.cli import main

sys.exit(main())
