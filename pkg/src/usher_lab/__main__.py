"""CLI entry point for usher-lab when run as python -m usher_lab."""

from .cli import main

if __name__ == "__main__":
    main()
