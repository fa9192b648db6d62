"""Harness des critères d'acceptation (oracles exacts à petite échelle).

Chaque critère est chronométré et comparé à sa limite de temps ; le rapport
Markdown et le JSON détaillé vont dans evaluation/results/.
"""
