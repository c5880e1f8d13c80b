use serde::Serialize;
use serde_json::Value;
use z4forge::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExhausted { .. } => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Mismatch,
    BudgetExhausted,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => EXIT_OK,
            Status::Mismatch => EXIT_MISMATCH,
            Status::BudgetExhausted => EXIT_BUDGET,
        }
    }
}

/// Output of one command. The body is deterministic for fixed inputs, seed
/// and worker count; timings go to stderr only.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    /// SHA-256 of the input text (embedded artifacts: of their rendering).
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub status: Status,
    pub result: Value,
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: &str, digest: String) -> Self {
        Self {
            command: command.to_string(),
            input: input.to_string(),
            digest,
            seed: None,
            workers: None,
            status: Status::Ok,
            result: Value::Null,
            lines: Vec::new(),
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serialises");
            s.push('\n');
            return s;
        }
        let mut s = format!("command: {}\ninput: {}\ndigest: {}\n", self.command, self.input, self.digest);
        if let Some(seed) = self.seed {
            s += &format!("seed: {seed}\n");
        }
        if let Some(w) = self.workers {
            s += &format!("workers: {w}\n");
        }
        for l in &self.lines {
            s += l;
            s.push('\n');
        }
        s += &format!(
            "status: {}\n",
            serde_json::to_value(self.status).expect("status").as_str().unwrap_or("?")
        );
        s
    }
}
