"""Pytest configuration for running the backend suite from the repository root."""
import os
import sys

# The backend package root holds `src`
backend_root = os.path.join(os.path.dirname(os.path.abspath(__file__)), "backend")
if backend_root not in sys.path:
    sys.path.insert(0, backend_root)
