"""
CStar - Utilities

Constants, text formatting, and report output shared by the CLI and the
workflow nodes.
"""
