"""Defect causal analysis workbench.

Builds a cause-effect Bayesian network from citation records, learns its
parameters with EM over incomplete data, and drives facilitated defect
causal analysis sessions with diagnostic inference, SPC analytics, action
tracking, and within-company retraining.
"""

__version__ = "0.1.0"
