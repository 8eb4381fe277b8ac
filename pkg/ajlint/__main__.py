import sys

from ajlint.cli import main

sys.exit(main())
