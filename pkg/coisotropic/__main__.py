import sys

from coisotropic.cli import main

sys.exit(main())
