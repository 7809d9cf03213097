import sys

from homgraph.cli import main

sys.exit(main())
