import sys
from .cli import FockgateCLI

if __name__ == "__main__":
    cli = FockgateCLI()
    rv = cli(sys.argv[1:])
    sys.exit(rv)
