"""MCP tool server exposing check, solve, sweep and oracle"""
