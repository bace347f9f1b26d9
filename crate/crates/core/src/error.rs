use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid counts must be odd, got {n_x} x {n_y}")]
    EvenCount { n_x: usize, n_y: usize },
    #[error("grid counts must be at least 3, got {n_x} x {n_y}")]
    TooSmall { n_x: usize, n_y: usize },
    #[error("box widths must be positive, got {x_width} x {y_width}")]
    NonPositiveWidth { x_width: f64, y_width: f64 },
    #[error("field shape {rows} x {cols} does not match grid {n_x} x {n_y}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        n_x: usize,
        n_y: usize,
    },
    #[error("expected a {expected}-space field")]
    WrongDomain { expected: &'static str },
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {}: {source}", path.display())]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: invalid value for `{key}`: {value}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}
