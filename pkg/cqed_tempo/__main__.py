import sys

from cqed_tempo.main import main

sys.exit(main())
