"""Expectation-Maximization driver"""

from .em import e_step, em_fit, m_step, q_function, weighted_objective

__all__ = ['e_step', 'm_step', 'weighted_objective', 'q_function', 'em_fit']
