//! Combined certificate files: `{"graph": ..., "labeling": ..., "mode": "open"|"closed"}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Graph, GraphJson};
use crate::labeling::{verify, Labeling, LabelingJson, Mode, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub graph: GraphJson,
    pub labeling: LabelingJson,
    pub mode: Mode,
}

impl Certificate {
    pub fn new(graph: &Graph, labeling: &Labeling, mode: Mode) -> Self {
        Certificate {
            graph: graph.to_json(),
            labeling: labeling.to_json(),
            mode,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Certificate::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json_string();
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Decodes the graph and labeling, rejecting malformed edge lists or bitstrings.
    pub fn decode(&self) -> Result<(Graph, Labeling)> {
        Ok((
            Graph::from_json(&self.graph)?,
            Labeling::from_json(&self.labeling)?,
        ))
    }

    pub fn verify(&self) -> Result<Verdict> {
        let (g, l) = self.decode()?;
        Ok(verify(&g, &l, self.mode))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_input() {
        assert!(Certificate::parse("{").is_err());
        let loop_edge = r#"{"graph":{"order":2,"edges":[[1,1]]},"labeling":{"n":1,"labels":["0","1"]},"mode":"open"}"#;
        assert!(Certificate::parse(loop_edge).unwrap().decode().is_err());
        let short_label = r#"{"graph":{"order":2,"edges":[[0,1]]},"labeling":{"n":2,"labels":["0","1"]},"mode":"open"}"#;
        assert!(Certificate::parse(short_label).unwrap().decode().is_err());
        let bad_mode = r#"{"graph":{"order":2,"edges":[]},"labeling":{"n":1,"labels":["0","1"]},"mode":"half"}"#;
        assert!(Certificate::parse(bad_mode).is_err());
    }

    #[test]
    fn duplicate_labels_load_and_fail_verification() {
        let text = r#"{"graph":{"order":2,"edges":[[0,1]]},"labeling":{"n":1,"labels":["1","1"]},"mode":"closed"}"#;
        let c = Certificate::parse(text).unwrap();
        assert_eq!(c.verify().unwrap(), Verdict::NotBijection { vertex: 1 });
    }
}
