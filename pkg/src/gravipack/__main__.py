import sys

from gravipack.cli import main

sys.exit(main())
