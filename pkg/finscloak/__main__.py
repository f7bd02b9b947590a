import sys

from finscloak.cli.main import main

sys.exit(main())
