"""
SirsNet CLI - Groupes de commandes
"""
