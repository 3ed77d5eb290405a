"""
Exact deciders for top-k winner queries over partial voting profiles.
"""
