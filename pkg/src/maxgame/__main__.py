import sys

from maxgame.cli import main

sys.exit(main())
