"""
Energy functions, submodularity certificates and the graph-cut reduction
"""
