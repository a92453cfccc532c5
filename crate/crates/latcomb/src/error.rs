use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("torus window {width}x{height} too small (need at least 4x4)")]
    WindowTooSmall { width: i32, height: i32 },
    #[error("bad rectangle corners ({x0},{y0})-({x1},{y1})")]
    BadRect { x0: i32, y0: i32, x1: i32, y1: i32 },
    #[error("region wraps the torus in some axis")]
    RegionWraps,
    #[error("region is not 4-connected")]
    Disconnected,
    #[error("rectangles overlap")]
    OverlappingRects,
    #[error("empty rectangle list")]
    EmptyPolygon,
    #[error("empty path")]
    EmptyPath,
    #[error("path repeats a vertex")]
    RepeatedVertex,
    #[error("consecutive path vertices not adjacent")]
    NotAdjacent,
}

#[derive(Debug, Error)]
pub enum StokesError {
    #[error("point not in region")]
    PointOutsideRegion,
    #[error("region wraps the torus; charge sums need a wrap-free window")]
    RegionWraps,
    #[error("dimension {0} out of supported range 2..=4")]
    DimensionOutOfRange(usize),
    #[error("region too large for cube enumeration ({0} cells, cap {1})")]
    TooLarge(usize, usize),
    #[error("paths overlap")]
    PathsOverlap,
    #[error("straight run of length {0} shorter than required {1}")]
    RunTooShort(usize, usize),
    #[error("paths are not adjacent along their whole length")]
    NotAdjacentPaths,
}

#[derive(Debug, Error)]
pub enum MatchingError {
    #[error("edge endpoints not adjacent: ({0},{1})-({2},{3})")]
    EdgeNotUnit(i32, i32, i32, i32),
    #[error("vertex matched twice")]
    DegreeTooHigh,
    #[error("edge outside the strip")]
    EdgeOutsideStrip,
    #[error("strip thickness {0} must be even and >= 2")]
    BadThickness(i32),
    #[error("strip x-range invalid")]
    BadRange,
    #[error("matching is not full on the strip interior")]
    NotFull,
    #[error("column {0} outside the open range")]
    ColumnOutOfRange(i32),
    #[error("insufficient room: need b_new > {need}, got {got}")]
    InsufficientRoom { need: i32, got: i32 },
    #[error("currents differ: {0} vs {1}")]
    CurrentMismatch(i64, i64),
    #[error("gap between strips too small")]
    GapTooSmall,
    #[error("charge cell misplaced: {0:?}")]
    ChargeMisplaced(String),
    #[error("too many charges ({l}) for thickness {w} and current {k}")]
    TooManyCharges { l: usize, w: i32, k: i64 },
    #[error("charge gaps must be even")]
    OddChargeGap,
    #[error("state search failed to reach the target form within {0} columns")]
    NoSchedule(i32),
    #[error("deleted set not on the rectangle boundary")]
    DeletionsNotOnBoundary,
    #[error("deleted-set charge {0} does not match rectangle charge {1}")]
    ChargeImbalance(i64, i64),
    #[error("deleted set of size {0} too large for side {1}")]
    DeletionsTooMany(usize, i32),
    #[error("oracle size cap exceeded: {0} > {1}")]
    OracleTooLarge(usize, usize),
    #[error("band peel got stuck: {0}")]
    PeelStuck(String),
    #[error("corner geometry malformed: {0}")]
    BadCorner(String),
    #[error("thickness {0} above the supported cap {1}")]
    ThicknessTooLarge(i32, i32),
}

#[derive(Debug, Error)]
pub enum MarkerError {
    #[error("marker distance {0} too large for torus")]
    DistanceTooLarge(i32),
    #[error("infeasible scale: cannot split extent {extent} into parts within [{lo},{hi}]")]
    InfeasibleScale { extent: i32, lo: i32, hi: i32 },
    #[error("growth ratio {0:.3} outside configured band [{1:.3},{2:.3}]")]
    GrowthRatio(f64, f64, f64),
    #[error("torus must be at least 10x the largest marker distance (got {torus} vs d_M={dmax})")]
    TorusTooSmall { torus: i32, dmax: i32 },
    #[error("hierarchy audit failed at level {level}: {what}")]
    AuditFailed { level: usize, what: String },
    #[error("subdivision precondition failed: {0}")]
    SubdividePre(String),
    #[error("bump placement failed on segment: {0}")]
    BumpPlacement(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("level {0} out of range 1..={1}")]
    LevelOutOfRange(usize, usize),
    #[error("toast hypothesis violated: d*P={0} > Q={1}")]
    ToastHypothesis(i64, i64),
    #[error("split hypothesis violated: (2d+1)*P={0} > Q={1}")]
    SplitHypothesis(i64, i64),
    #[error("audit failed: {0}")]
    AuditFailed(String),
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("buffered atom: boundary run of {run} shorter than required {need}")]
    RunTooShort { run: usize, need: usize },
    #[error("buffer width {0} must be even and >= 2")]
    BadBufferWidth(i32),
    #[error("adjacency graph disconnected for parent atom {0}")]
    DisconnectedAtomGraph(usize),
    #[error("stage {stage} atom {atom}: {what}")]
    StageFailure {
        stage: String,
        atom: usize,
        what: String,
    },
    #[error("induction audit failed at level {level}: {what}")]
    InductionAudit { level: usize, what: String },
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Marker(#[from] MarkerError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error)]
pub enum LiningError {
    #[error("region charge {0} nonzero")]
    ChargeNonZero(i64),
    #[error("endpoints not adjacent")]
    EndpointsNotAdjacent,
    #[error("endpoint not on the boundary")]
    EndpointNotOnBoundary,
    #[error("endpoint within {0} of a corner (need >= {1})")]
    CornerClearance(i32, i32),
    #[error("parity region placement violates hypotheses: {0}")]
    BadDecoration(String),
    #[error("oracle size cap exceeded: {0} > {1}")]
    OracleTooLarge(usize, usize),
    #[error("no hamiltonian path found for a solvable piece: {0}")]
    PieceUnsolvable(String),
    #[error("piece too large for exact cover: {0} cells")]
    PieceTooLarge(usize),
    #[error("lining pipeline failed at level {level}, atom {atom}: {what}")]
    PipelineFailure {
        level: usize,
        atom: usize,
        what: String,
    },
    #[error(transparent)]
    Grid(#[from] GridError),
}
