"""
Command line entrypoints
"""
