use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("no tree: {0}")]
    NoTree(String),
    #[error("{0}")]
    Decode(arborist::Error),
    #[error("differential failure: {0}")]
    Divergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) | CliError::Decode(_) => 1,
            CliError::NoTree(_) => 2,
            CliError::Divergence(_) => 3,
        }
    }
}

impl From<arborist::Error> for CliError {
    fn from(e: arborist::Error) -> Self {
        match e {
            arborist::Error::NoTree => CliError::NoTree("the graph has no spanning tree of the requested kind".into()),
            other => CliError::Decode(other),
        }
    }
}
