"""
s-t max-flow / min-cut
"""
