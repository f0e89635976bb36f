//! Static-shape experiment tables, in millimetres.

/// Cable-tie length.
pub const L_ZIP: f64 = 470.0;

/// Per shape: `(k, s0, x(L), y(L))`; the full period equals `L_ZIP` and
/// `s0` is tabulated in metres.
pub const SHAPES: [(f64, f64, f64, f64); 6] = [
    (0.4637, 0.2350, 365.87, 0.0),
    (0.6021, 0.2193, 278.81, 79.99),
    (0.6743, 0.2135, 217.25, 102.37),
    (0.7640, 0.2135, 143.21, 83.76),
    (0.7917, 0.2272, 136.59, 28.75),
    (0.7395, 0.2350, 187.75, 0.0),
];

/// Published per-shape means of the absolute and relative errors.
pub const REPORTED_MEAN_ABS: [f64; 6] = [2.17, 1.96, 1.24, 2.54, 2.39, 2.27];
pub const REPORTED_STD_ABS: [f64; 6] = [0.35, 0.43, 0.75, 0.62, 0.79, 1.27];
pub const REPORTED_MEAN_REL: [f64; 6] = [1.08, 1.07, 0.63, 1.34, 1.27, 1.04];

/// Elastica sample points `i = 1..=15` and measured points `i = 2..=14`,
/// indexed `[shape][point]`. The error tables cover `i = 2..=14`.
pub const ELASTICA_POINTS: [[(f64, f64); 15]; 6] = [
    [
        (28.79, 5.58),
        (54.73, 21.36),
        (75.64, 43.49),
        (93.18, 67.83),
        (110.75, 91.51),
        (132.50, 112.80),
        (158.37, 126.69),
        (188.43, 130.53),
        (217.67, 122.52),
        (242.15, 105.38),
        (262.23, 82.47),
        (279.26, 58.39),
        (297.92, 34.29),
        (320.73, 14.16),
        (348.04, 2.11),
    ],
    [
        (28.16, 7.57),
        (49.60, 28.82),
        (60.22, 57.23),
        (62.87, 87.08),
        (63.09, 116.58),
        (66.63, 146.81),
        (78.23, 173.75),
        (100.88, 193.69),
        (130.47, 199.37),
        (158.67, 189.98),
        (181.47, 169.91),
        (198.52, 145.87),
        (215.06, 120.25),
        (235.19, 97.45),
        (261.09, 82.72),
    ],
    [
        (27.74, 8.61),
        (46.16, 32.36),
        (50.24, 62.33),
        (44.07, 91.62),
        (34.25, 119.43),
        (26.46, 148.87),
        (27.38, 178.18),
        (42.03, 204.47),
        (68.96, 217.67),
        (98.24, 213.27),
        (122.56, 195.21),
        (139.94, 171.43),
        (155.64, 145.29),
        (174.48, 121.39),
        (199.60, 105.43),
    ],
    [
        (26.98, 10.20),
        (40.68, 36.74),
        (36.38, 66.59),
        (21.08, 92.29),
        (2.40, 115.11),
        (-14.66, 140.32),
        (-22.29, 168.57),
        (-13.55, 197.20),
        (11.87, 212.70),
        (40.85, 207.50),
        (62.91, 186.85),
        (76.34, 160.65),
        (87.42, 132.24),
        (102.40, 105.78),
        (125.70, 87.38),
    ],
    [
        (26.60, 10.95),
        (39.51, 37.96),
        (36.33, 68.06),
        (24.68, 95.66),
        (12.11, 122.34),
        (5.13, 151.88),
        (11.67, 180.24),
        (35.09, 198.57),
        (64.55, 194.67),
        (84.20, 172.63),
        (91.14, 143.12),
        (90.80, 113.64),
        (90.70, 83.16),
        (98.53, 53.89),
        (119.24, 32.88),
    ],
    [
        (27.22, 9.80),
        (44.15, 34.70),
        (48.62, 64.72),
        (46.66, 94.65),
        (45.38, 124.09),
        (51.75, 153.73),
        (70.29, 176.17),
        (99.36, 182.96),
        (125.87, 169.11),
        (139.75, 142.88),
        (142.39, 112.60),
        (140.05, 83.19),
        (139.72, 52.74),
        (148.60, 23.81),
        (170.29, 3.78),
    ],
];

pub const MEASURED_POINTS: [[(f64, f64); 13]; 6] = [
    [
        (53.82, 19.62),
        (73.89, 42.09),
        (91.91, 65.21),
        (108.88, 89.68),
        (130.80, 111.10),
        (156.66, 126.53),
        (186.46, 130.50),
        (215.78, 123.55),
        (239.66, 106.13),
        (260.60, 83.70),
        (278.59, 60.21),
        (297.13, 36.17),
        (319.72, 15.58),
    ],
    [
        (46.93, 28.24),
        (57.99, 55.90),
        (61.50, 85.49),
        (62.00, 115.99),
        (64.99, 145.88),
        (76.91, 173.22),
        (99.22, 193.05),
        (127.96, 199.50),
        (156.74, 190.07),
        (180.12, 171.18),
        (197.08, 147.23),
        (213.59, 121.21),
        (234.67, 99.12),
    ],
    [
        (44.97, 32.32),
        (47.50, 62.04),
        (41.48, 91.65),
        (33.97, 119.66),
        (26.49, 149.07),
        (27.99, 178.38),
        (42.35, 205.14),
        (67.57, 218.00),
        (97.30, 213.04),
        (121.33, 195.66),
        (140.07, 172.74),
        (156.58, 146.73),
        (175.15, 122.14),
    ],
    [
        (39.50, 36.93),
        (32.66, 66.69),
        (17.90, 93.30),
        (0.39, 116.81),
        (-15.05, 142.72),
        (-22.50, 171.01),
        (-14.10, 199.20),
        (12.08, 215.51),
        (40.76, 210.06),
        (62.59, 188.72),
        (77.04, 163.31),
        (88.54, 134.80),
        (102.61, 108.19),
    ],
    [
        (37.50, 38.44),
        (32.98, 68.15),
        (22.45, 96.22),
        (11.96, 123.19),
        (6.50, 153.02),
        (12.93, 181.25),
        (35.13, 200.27),
        (64.25, 197.57),
        (84.55, 174.79),
        (92.00, 145.97),
        (92.50, 116.52),
        (92.50, 85.96),
        (98.56, 55.77),
    ],
    [
        (42.47, 34.34),
        (46.50, 64.50),
        (46.00, 95.05),
        (45.50, 124.48),
        (51.46, 153.80),
        (68.77, 176.58),
        (97.93, 184.50),
        (124.64, 171.66),
        (139.52, 146.38),
        (143.50, 116.52),
        (142.00, 86.04),
        (142.00, 54.95),
        (148.07, 20.25),
    ],
];

pub const REPORTED_ABS_ERRORS: [[f64; 13]; 6] = [
    [1.96, 2.24, 2.90, 2.61, 2.39, 1.72, 1.96, 2.14, 2.60, 2.03, 1.94, 2.04, 1.74],
    [2.73, 2.59, 2.09, 1.24, 1.88, 1.42, 1.77, 2.50, 1.93, 1.84, 1.98, 1.75, 1.75],
    [1.19, 2.75, 2.59, 0.36, 0.20, 0.64, 0.74, 1.43, 0.96, 1.30, 1.31, 1.72, 1.00],
    [1.20, 3.72, 3.34, 2.63, 2.43, 2.45, 2.07, 2.81, 2.56, 1.89, 2.75, 2.79, 2.42],
    [2.06, 3.35, 2.29, 0.85, 1.77, 1.61, 1.69, 2.90, 2.18, 2.97, 3.35, 3.32, 1.87],
    [1.71, 2.13, 0.77, 0.40, 0.30, 1.57, 2.10, 2.83, 3.50, 4.07, 3.45, 3.17, 3.59],
];

pub const REPORTED_REL_ERRORS: [[f64; 13]; 6] = [
    [2.49, 2.53, 2.21, 1.81, 1.37, 0.70, 0.70, 0.45, 0.74, 0.42, 0.09, 0.19, 0.29],
    [4.52, 3.04, 1.94, 0.78, 0.94, 0.54, 0.60, 0.52, 0.46, 0.04, 0.14, 0.32, 0.06],
    [1.77, 2.40, 1.04, 0.11, 0.13, 0.16, 0.34, 0.04, 0.25, 0.11, 0.49, 0.78, 0.46],
    [1.35, 2.14, 0.36, 1.45, 1.72, 1.44, 1.03, 1.31, 1.17, 0.84, 1.52, 1.73, 1.28],
    [1.99, 1.86, 0.01, 0.66, 0.78, 0.60, 0.83, 1.29, 1.08, 1.68, 2.28, 2.61, 0.83],
    [2.73, 1.77, 0.06, 0.30, 0.02, 0.08, 0.32, 0.62, 1.17, 1.83, 1.92, 1.95, 0.69],
];

