import os
import sys

# make _gen importable regardless of how pytest resolves rootdir
sys.path.insert(0, os.path.dirname(__file__))
