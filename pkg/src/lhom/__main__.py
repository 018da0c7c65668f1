from lhom.cli import main
import sys

sys.exit(main())
