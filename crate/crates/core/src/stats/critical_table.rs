// Generated by examples/ppcc_critical.rs; do not edit by hand.
// Columns: uniform 0.05, uniform 0.01, gaussian 0.05, gaussian 0.01,
// half-gaussian 0.05, half-gaussian 0.01.
pub(super) const REPLICATES: usize = 20000;
pub(super) const SEED: u64 = 0x5a170b1e;
pub(super) const TABLE: &[(usize, [f64; 6])] = &[
    (3, [0.8762, 0.8680, 0.8790, 0.8686, 0.8510, 0.8206]),
    (4, [0.8522, 0.8100, 0.8657, 0.8232, 0.8703, 0.7891]),
    (5, [0.8677, 0.8048, 0.8783, 0.8238, 0.8742, 0.8193]),
    (6, [0.8806, 0.8170, 0.8902, 0.8344, 0.8849, 0.8314]),
    (7, [0.8921, 0.8372, 0.8954, 0.8475, 0.8932, 0.8398]),
    (8, [0.9034, 0.8506, 0.9046, 0.8572, 0.9025, 0.8577]),
    (9, [0.9106, 0.8626, 0.9123, 0.8699, 0.9098, 0.8679]),
    (10, [0.9192, 0.8760, 0.9161, 0.8752, 0.9162, 0.8747]),
    (12, [0.9318, 0.8969, 0.9267, 0.8917, 0.9245, 0.8884]),
    (14, [0.9404, 0.9091, 0.9350, 0.9026, 0.9312, 0.8978]),
    (16, [0.9476, 0.9221, 0.9409, 0.9115, 0.9382, 0.9072]),
    (18, [0.9536, 0.9306, 0.9451, 0.9174, 0.9432, 0.9128]),
    (20, [0.9569, 0.9360, 0.9502, 0.9265, 0.9464, 0.9179]),
    (25, [0.9657, 0.9494, 0.9580, 0.9393, 0.9553, 0.9298]),
    (30, [0.9710, 0.9580, 0.9629, 0.9463, 0.9601, 0.9351]),
    (35, [0.9752, 0.9640, 0.9682, 0.9537, 0.9650, 0.9457]),
    (40, [0.9782, 0.9679, 0.9716, 0.9587, 0.9685, 0.9506]),
    (45, [0.9807, 0.9710, 0.9741, 0.9621, 0.9710, 0.9542]),
    (50, [0.9825, 0.9746, 0.9763, 0.9658, 0.9731, 0.9569]),
    (60, [0.9855, 0.9783, 0.9794, 0.9705, 0.9771, 0.9644]),
    (70, [0.9874, 0.9814, 0.9824, 0.9749, 0.9797, 0.9674]),
    (80, [0.9891, 0.9838, 0.9842, 0.9770, 0.9821, 0.9724]),
    (90, [0.9902, 0.9851, 0.9856, 0.9795, 0.9835, 0.9736]),
    (100, [0.9912, 0.9871, 0.9872, 0.9822, 0.9850, 0.9762]),
    (125, [0.9930, 0.9899, 0.9893, 0.9848, 0.9876, 0.9807]),
    (150, [0.9940, 0.9913, 0.9911, 0.9871, 0.9895, 0.9834]),
    (175, [0.9949, 0.9927, 0.9921, 0.9889, 0.9907, 0.9858]),
    (200, [0.9956, 0.9933, 0.9931, 0.9900, 0.9917, 0.9872]),
    (250, [0.9965, 0.9949, 0.9942, 0.9921, 0.9932, 0.9893]),
    (300, [0.9970, 0.9955, 0.9952, 0.9933, 0.9942, 0.9911]),
    (350, [0.9975, 0.9963, 0.9959, 0.9943, 0.9950, 0.9923]),
    (400, [0.9978, 0.9967, 0.9963, 0.9949, 0.9956, 0.9932]),
    (450, [0.9981, 0.9971, 0.9967, 0.9954, 0.9960, 0.9938]),
    (500, [0.9982, 0.9974, 0.9970, 0.9958, 0.9963, 0.9943]),
    (600, [0.9985, 0.9978, 0.9975, 0.9966, 0.9969, 0.9954]),
    (700, [0.9987, 0.9982, 0.9978, 0.9970, 0.9973, 0.9959]),
    (800, [0.9989, 0.9983, 0.9981, 0.9974, 0.9976, 0.9965]),
    (900, [0.9990, 0.9985, 0.9983, 0.9976, 0.9979, 0.9969]),
    (1000, [0.9991, 0.9987, 0.9984, 0.9978, 0.9981, 0.9971]),
];
