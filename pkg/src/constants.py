class Constants:
    # Logging
    LOGGER_NAME = 'steklov_warp'
    LOG_DIR = 'logs'
    LOG_FILE = 'steklov_warp.log'
    DEFAULT_LOG_LEVEL = 'INFO'

    # Config
    CONFIG_FILE = 'configs/config.yaml'

    # Closed spectra
    TORUS_MERGE_RTOL = 1e-12

    # Linear algebra
    SYMMETRY_RTOL = 1e-12
    JACOBI_OFF_RTOL = 1e-14
    JACOBI_MAX_SWEEPS = 100
    EIG_RESIDUAL_RTOL = 1e-10
    BANDED_MAX_BANDWIDTH = 16

    # Sturm problems
    MIN_ELEMENTS = 16
    MIN_TRANSITION_ELEMENTS = 8
    DEFAULT_MESH_ELEMENTS = 400

    # Warped products
    MERGE_RTOL = 1e-7
    MERGE_ATOL = 1e-12
    # eigenvalues below ZERO_RTOL times the largest one are zero
    ZERO_RTOL = 1e-10
    # paired values below COMPARE_ZERO_RTOL times the cut compare as zero
    COMPARE_ZERO_RTOL = 1e-6
    INITIAL_TOP = 1.0
    MAX_TOP_DOUBLINGS = 60

    # sigma_1 branches
    BRANCH_BASE = 'base'
    BRANCH_FIBER = 'fiber'

    # Oracle
    MIN_AXIAL_NODES = 32
    MIN_FIBER_NODES = 16

    # Experiments
    KOKAREV_SLACK = 1e-6
    NORMALIZE_RTOL = 1e-10
    NORMALIZE_C_BOUND = 1e3
    FLOAT_DIGITS = 12
    GROWTH_ENVELOPE = 0.1

    # Metric modes
    PLAIN_WARP = 'plain_warp'
    VOLUME_PRESERVING = 'volume_preserving'
    CONFORMAL = 'conformal'

    # Profile roles
    ROLE_WARP = 'warp'
    ROLE_GRADIENT_WEIGHT = 'gradient_weight'

    # Boundary conditions
    STEKLOV = 'steklov'
    NEUMANN = 'neumann'

    # Exit codes
    EXIT_OK = 0
    EXIT_FAILURE = 1
    EXIT_CONFIG = 2

    # CSV headers
    SPECTRUM_COLUMNS = ['value', 'multiplicity', 'lambda_fiber', 'mu_mode', 'branch']
    SWEEP_COLUMNS = ['epsilon', 'sigma1', 'active_branch', 'lower_bound_C', 'mesh_size', 'runtime_ms']
    ORACLE_COLUMNS = ['index', 'value']
    KOKAREV_COLUMNS = ['epsilon', 'sigma1', 'boundary_length', 'ratio', 'passed']
    QUASI_ISO_COLUMNS = ['pair', 'C', 'bound', 'min_ratio', 'max_ratio', 'passed']
    NORMALIZE_COLUMNS = ['c', 'dim', 'target', 'residual']
