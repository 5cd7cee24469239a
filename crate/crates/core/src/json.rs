//! The family interchange format:
//!
//! ```json
//! {"parts":[{"n":5,"k":2},{"n":5,"k":2}],"sets":[[[1,2],[1,2]],[[2,3],[1,2]]]}
//! ```
//!
//! Each entry of `sets` holds one sorted value list per part. Serialization
//! writes members in canonical (colex) order, so equal families produce
//! identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{Family, PartStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartDoc {
    pub n: i64,
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub parts: Vec<PartDoc>,
    pub sets: Vec<Vec<Vec<u32>>>,
}

impl PartStructure {
    pub fn to_doc(&self) -> Vec<PartDoc> {
        self.ns()
            .iter()
            .zip(self.ks())
            .map(|(&n, &k)| PartDoc { n: n.into(), k: k.into() })
            .collect()
    }

    pub fn from_doc(parts: &[PartDoc]) -> Result<Self> {
        let n: Vec<i64> = parts.iter().map(|p| p.n).collect();
        let k: Vec<i64> = parts.iter().map(|p| p.k).collect();
        PartStructure::new(&n, &k)
    }
}

impl Family {
    pub fn to_doc(&self) -> FamilyDoc {
        FamilyDoc {
            parts: self.structure().to_doc(),
            sets: self.iter().map(|m| m.parts().to_vec()).collect(),
        }
    }

    /// Validates a document against its own part structure. Duplicate sets
    /// are merged.
    pub fn from_doc(doc: FamilyDoc) -> Result<Self> {
        let ps = PartStructure::from_doc(&doc.parts)?;
        Family::from_lists(&ps, doc.sets)
    }

    /// Compact canonical JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("family documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FamilyDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Family::from_doc(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_the_documented_example() {
        let text = r#"{"parts":[{"n":5,"k":2},{"n":5,"k":2}],"sets":[[[1,2],[1,2]],[[2,3],[1,2]]]}"#;
        let f = Family::from_json(text).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.to_json(), text);
    }

    #[test]
    fn canonicalizes_order_and_duplicates() {
        let text = r#"{"parts":[{"n":4,"k":2}],"sets":[[[3,4]],[[1,2]],[[3,4]]]}"#;
        let f = Family::from_json(text).unwrap();
        assert_eq!(f.to_json(), r#"{"parts":[{"n":4,"k":2}],"sets":[[[1,2]],[[3,4]]]}"#);
    }

    #[test]
    fn rejects_bad_documents() {
        for bad in [
            "not json",
            r#"{"parts":[{"n":4,"k":5}],"sets":[]}"#,
            r#"{"parts":[{"n":4,"k":2}],"sets":[[[1]]]}"#,
            r#"{"parts":[{"n":4,"k":2}],"sets":[[[1,2],[1]]]}"#,
            r#"{"parts":[{"n":4,"k":2}],"sets":[[[2,1]]]}"#,
            r#"{"parts":[],"sets":[]}"#,
        ] {
            assert!(Family::from_json(bad).is_err(), "{bad}");
        }
    }
}
