"""
Published values the computed artifacts are compared against
"""

# ==================== barrier ====================
MU0_LOG10_PROBABILITY = -1280          # probability step of the mu(0) chain
MU0_LOG10_BOUND_CHAIN = -1281          # mu(0) chain conclusion
MU0_LOG10_BOUND_HEADLINE = -1282       # headline mu(0) bound
MU1_LOG10_PROBABILITY = -4532
MU1_LOG10_BOUND_HEADLINE = -4535

MU0_EPSILON = 0.086161
MU1_EPSILON = 0.064008
MU0_S = 3.729324
MU1_S = 5.215701
MU1_S_TAIL_FROM_7 = 0.689769

# mu(1) table, values truncated to 4 digits:
# n -> (u_n, |J_n(u_n)|, v_n, |J_n(v_n)/v_n|, w_n, |J_n'(w_n)|, S_n)
# S_n there adds |J_n(v_n)/v_n| without the factor n, so the table sums to MU1_S
# while the certified sum on the same interval is larger
MU1_TABLE = {
    1: (1.9048, 0.5810, 5.1356, 0.0661, 3.5183, 0.4194, 1.0666),
    2: (3.0542, 0.4864, 2.2999, 0.1799, 4.8879, 0.3478, 1.0143),
    3: (4.2011, 0.4343, 3.6112, 0.1107, 6.0200, 0.3009, 0.8461),
    4: (5.3175, 0.3996, 4.8112, 0.0787, 3.6804, 0.1548, 0.6333),
    5: (6.0200, 0.3631, 5.9623, 0.0603, 4.7082, 0.1338, 0.5573),
    6: (6.0200, 0.2481, 6.0200, 0.0412, 5.7285, 0.1188, 0.4082),
}

# ==================== symmetrization ====================
SINGLE_RADIUS = 3.8317
SINGLE_RADIUS_T = 3.2086
SINGLE_RADIUS_BOUND = 2.1186e-5
NESTED_T = 41.9286
NESTED_BOUND = 3.2724e-247

# ==================== simulation ====================
MU0_SIMULATED = 0.9117
MU1_SIMULATED = 0.0514
FOUR_PI_CNS_SIMULATED = 0.0589

# log10 exponent slack the published chains themselves use between steps
EXPONENT_SLACK = 2
