import sys

from maxmam.cli import main

sys.exit(main())
