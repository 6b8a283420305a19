#!/usr/bin/env python3
import sys
import os

# Make the top-level packages importable when run from anywhere
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli import main

if __name__ == '__main__':
    sys.exit(main())
