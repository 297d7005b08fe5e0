from eveinfo.cli import main
import sys

sys.exit(main())
