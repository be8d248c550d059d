import sys

from distfree.cli.main import main

sys.exit(main())
