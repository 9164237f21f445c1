import sys

from mvscn.cli import main

sys.exit(main())
