# fh_app/constants.py
"""Константы: физические постоянные, допуски и встроенный реестр молекул"""

# CODATA-2018
HBAR_EV_NS = 6.582119569e-7  # ħ, эВ·нс
AMU_TO_EV_PER_C2 = 931.49410242e6  # 1 а.е.м. в эВ/c²

# Допуски
SINGULARITY_TOLERANCE = 1e-30  # |q − e^{2α(t−t0)}| ниже этого - полюс
REALNESS_SLACK = 1e-12  # относительный люфт для A + M ≤ 0 и C − A − L + 1/4 ≥ 0
DISCRIMINANT_TOLERANCE = 1e-9  # масштабированный дискриминант при найденном k
BRANCH_EXPONENT_SLACK = 1e-12
QUANTIZATION_XTOL = 1e-200
QUANTIZATION_MAXITER = 2000
BRACKET_MAX_EXPANSIONS = 200
DEFAULT_QUADRATURE_ORDER = 200

# Сеточный оракул
MIN_GRID_POINTS = 64
MAX_COUNT_FRACTION = 4  # count ≤ num_points / 4
BISECTION_MAX_ITERATIONS = 400
INVERSE_ITERATION_MAX_STEPS = 12
INVERSE_ITERATION_TOLERANCE = 1e3  # в единицах eps·‖T‖
ADVISOR_SATURATION = 1e-4  # стенка не выше (1 − 1e-4)·асимптоты
ADVISOR_STEP_FACTOR = 1e-3  # ε = 1e-3/α
ADVISOR_MAX_DOUBLINGS = 200
ADVISOR_TAIL_DECAY_LENGTHS = 10  # запас за точкой поворота, в длинах затухания
ADVISOR_MAX_TAIL = 10  # не более 10/α

# Отчёты
CSV_HEADER = ("sweep_var", "molecule", "n", "variant", "value")
EXCLUDED = "excluded"
POTENTIAL_SERIES = "potential"
BOX_SELF_TEST_POINTS = 2000
BOX_SELF_TEST_THRESHOLD = 1e-3

# Опорные молекулы: name,De (eV),te (ns),mu (a.m.u.),t0 (ns),q
DEFAULT_REGISTRY = """\
# name,De,te,mu,t0,q
CO,10.84514471,1.1283,6.860586000,1.128300118,-0.6544806294
N2,9.9051,1.0970,7.0034,1.097000113,-0.3543700921
H2,4.7446,0.7416,0.5039,0.7416001485,-0.3236073943
LiH,2.5155,1.5955,0.8801,1.595500403,-0.3326882575
"""
