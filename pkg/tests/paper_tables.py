"""Published error tables and improvement percentages used as arithmetic fixtures.

Each entry is ``(baseline_row, proposed_row, printed_improvements)`` with rows in
MAE, RMSE, MAPE, IA, U1, U2, r order. Rows whose last cell is missing in the
source are given as six values.
"""

PM25_JINAN_PROPOSED = (4.869, 6.160, 10.820, 0.979, 0.055, 0.317, 0.963)
PM25_NANJING_PROPOSED = (2.901, 3.810, 8.718, 0.987, 0.048, 0.327, 0.977)
PM25_CHONGQING_PROPOSED = (2.814, 3.572, 7.381, 0.986, 0.041, 0.320, 0.973)
PM10_JINAN_PROPOSED = (6.975, 9.098, 7.509, 0.973, 0.040, 0.306, 0.966)
PM10_NANJING_PROPOSED = (4.459, 5.547, 8.208, 0.987, 0.039, 0.392, 0.976)

IMPROVEMENT_CASES = {
    "PM2.5 Jinan vs ARIMA": (
        (15.866, 20.901, 35.913, 0.693, 0.197, 0.862, 0.496),
        PM25_JINAN_PROPOSED,
        (69.312, 70.528, 69.872, 41.270, 72.081, 63.225, 94.153),
    ),
    "PM2.5 Jinan vs CEEMD-MOHHO-ELM": (
        (6.969, 8.762, 15.253, 0.950, 0.080, 0.530, 0.936),
        PM25_JINAN_PROPOSED,
        (30.133, 29.696, 29.063, 3.053, 31.250, 40.189, 2.885),
    ),
    "PM2.5 Nanjing vs EMD-MOHHO-ELM": (
        (6.627, 7.905, 23.567, 0.947, 0.099, 0.593, 0.900),
        PM25_NANJING_PROPOSED,
        (56.225, 51.803, 63.008, 4.224, 51.515, 44.857, 8.556),
    ),
    "PM2.5 Chongqing vs ELM": (
        (9.157, 12.069, 24.922, 0.803, 0.139, 0.617, 0.665),
        PM25_CHONGQING_PROPOSED,
        (69.269, 70.404, 70.384, 22.790, 70.504, 48.136, 46.316),
    ),
    "PM10 Jinan vs ARIMA": (
        (24.168, 31.721, 25.061, 0.592, 0.143, 0.839, 0.347),
        PM10_JINAN_PROPOSED,
        (71.140, 71.319, 70.037, 64.358, 72.028, 63.528, 178.386),
    ),
    "PM10 Jinan vs LSSVM": (
        (23.146, 30.402, 26.236, 0.545, 0.133, 0.720, 0.300),
        PM10_JINAN_PROPOSED,
        (69.865, 70.074, 71.379, 78.532, 69.925, 57.500, 222.000),
    ),
    "PM10 Nanjing vs ARIMA": (
        (15.957, 19.760, 31.894, 0.767, 0.143, 0.862, 0.635),
        PM10_NANJING_PROPOSED,
        (72.056, 71.928, 74.265, 28.683, 72.727, 54.524),
    ),
    "PM10 Nanjing vs CEEMD-MOHHO-ELM": (
        (9.304, 17.243, 14.872, 0.856, 0.125, 0.770, 0.746),
        PM10_NANJING_PROPOSED,
        (52.074, 67.830, 44.809, 15.304, 68.800, 49.091, 30.831),
    ),
}
