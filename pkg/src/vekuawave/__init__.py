"""Transmutation-operator solver for 1D Maxwell fields in inhomogeneous layers."""

from .bicomplex import Bicomplex, J, P_MINUS, P_PLUS, mul, split
from .formal_powers import FormalPowersTable, build_powers, wave_traces
from .medium import (Constant, MediumError, MediumProfile, PowerLaw, build_profile,
                     integrate_in_xi, potential_q, profile_from_table)
from .quadrature import UniformMesh, nc6_cumulative, spline_cumulative, trig_moments
from .signals import (GaussianSignal, GeneralInitialData, LinearCombination, PSKSignal,
                      SampledSignal, TrigInitialData, TrigSignal, Zero, from_EH_general,
                      from_EH_trig, gaussian_moments, psk_moments, sampled_moments)
from .solver import (FieldGrid, GridSpec, dalembert, from_fields, maxwell_residual, single_wave,
                     solve, solve_general, solve_trig, to_fields, vekua_residual)
from .transmutation import (DomainError, Transmutation, TransmutationCoeffs, apply_T1f_exp,
                            apply_T1f_general, apply_Tf_exp, apply_Tf_general, fit_auto,
                            fit_coefficients, goursat_data, select_order)

__version__ = "0.1.0"
