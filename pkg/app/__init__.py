"""
lpcut: l_p-norm binary labeling via graph cuts
"""
