from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .recovery import FEAS_TOL, LinearSystem, solve_l1, solve_l1_nonneg


class BasisPursuit(RegressorMixin, BaseEstimator):
    """Minimum-l1 solution of an underdetermined system, as an estimator.

    ``fit(A, y)`` solves ``min ||x||_1  s.t.  A x = y`` (with ``x >= 0`` when
    ``nonnegative``) and stores the solution in ``coef_``.  ``predict(A)``
    returns ``A @ coef_``.
    """

    def __init__(self, nonnegative=False, feas_tol=FEAS_TOL):
        self.nonnegative = nonnegative
        self.feas_tol = feas_tol

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        solver = solve_l1_nonneg if self.nonnegative else solve_l1
        res = solver(LinearSystem(X, y), feas_tol=self.feas_tol)
        self.coef_ = res.x_hat
        self.objective_ = res.objective
        self.status_ = res.status
        self.n_iter_ = res.lp.iterations if res.lp is not None else 0
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        return X @ self.coef_
