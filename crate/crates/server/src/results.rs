use crate::room::GameResult;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;

/// Append-only JSONL log of finished games.
pub struct ResultsLog {
    file: Mutex<File>,
}

impl ResultsLog {
    pub fn open(path: &Path) -> std::io::Result<ResultsLog> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(ResultsLog { file: Mutex::new(file) })
    }

    pub fn append(&self, result: &GameResult) -> std::io::Result<()> {
        let mut line = serde_json::to_vec(result).map_err(std::io::Error::other)?;
        line.push(b'\n');
        let mut f = self.file.lock().unwrap();
        f.write_all(&line)?;
        f.flush()
    }
}
