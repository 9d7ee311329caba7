use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("record {record} has {found} fields, expected {expected}")]
    RaggedRecord {
        record: u64,
        expected: usize,
        found: usize,
    },

    #[error("header has {header} fields but records have {record}")]
    HeaderMismatch { header: usize, record: usize },

    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),

    #[error("schema has {0} attributes; at most {max} are supported", max = crate::relation::MAX_ATTRIBUTES)]
    TooManyAttributes(usize),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("attribute position {position} out of range for schema of {width}")]
    PositionOutOfRange { position: usize, width: usize },

    #[error("row {row} out of range for relation of {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },

    #[error("attribute set must not be empty")]
    EmptyAttributeSet,

    #[error("dropping every column leaves nothing to profile")]
    NothingLeft,

    #[error("schema needs at least two attributes, found {0}")]
    SchemaTooSmall(usize),

    #[error("invalid threshold `{0}`: expected a decimal or fraction in [0, 1]")]
    InvalidThreshold(String),

    #[error("sentinel value {0} already occurs in the relation")]
    SentinelCollision(i64),

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("malformed formula: {0}")]
    MalformedFormula(String),

    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
