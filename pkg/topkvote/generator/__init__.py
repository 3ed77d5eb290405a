"""
Instance generators: hardness reductions, metamorphic transforms, seeded corpora.
"""
