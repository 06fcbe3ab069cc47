"""
Brute-force ground truth and instance generators
"""
