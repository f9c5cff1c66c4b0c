#!/usr/bin/env python3
"""
Command-line entry point for semlab.
"""

from semlab.cli import main

if __name__ == "__main__":
    main()
