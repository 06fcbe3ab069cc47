"""
Domain models for lpcut
"""
