import sys

from pcsent.cli import main

sys.exit(main())
