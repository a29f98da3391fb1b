//! Named example graphs.

use super::{parse_graph, GraphPresentation};
use crate::error::{Error, Result};

const ROSE: &str = "graph rose
family k >= 1: edge e[k] from v1 to v1
";

const LINE: &str = "graph line
family k >= 1: edge e[k] from u[k] to u[k+1]
";

/// The smallest set of edges met by every infinite path is `{e2}`; attractor search
/// scans initial segments `F_t` and therefore reports `{e1, e2}`.
const RENEWAL: &str = "graph renewal
family k >= 1: edge e[2k-1] from u1 to u[k+1]
family k >= 1: edge e[2k] from u[k+1] to u[k]
";

const FOLLOWER: &str = "graph follower
edge e1 from u1 to u1
family k >= 2: edge e[k] from u[k] to u1
";

const E2: &str = "graph e2
edge e1 from u to v
edge e2 from v to u
family k >= 2: edge e[2k-1] from u to u
family k >= 2: edge e[2k] from v to v
";

const EF: &str = "graph ef
edge e1 from v1 to v1
family k >= 2: edge e[k] from v[k] to v[k-1]
";

const E1VAR: &str = "graph e1var
edge e1 from v1 to v2
family k >= 1: edge e[2k] from v[2k] to v[2k+2]
family k >= 1: edge e[2k+1] from v[2k+1] to v[2k-1]
";

const TABLE: [(&str, &str); 7] = [
    ("rose", ROSE),
    ("line", LINE),
    ("renewal", RENEWAL),
    ("follower", FOLLOWER),
    ("e2", E2),
    ("ef", EF),
    ("e1var", E1VAR),
];

/// Names accepted by [`builtin`], in table order.
pub fn builtin_names() -> Vec<&'static str> {
    TABLE.iter().map(|(n, _)| *n).collect()
}

/// A named example presentation: `rose`, `line`, `renewal`, `follower`, `e2`, `ef`, `e1var`.
pub fn builtin(name: &str) -> Result<GraphPresentation> {
    let text = TABLE
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
    parse_graph(text)
}

/// Name of the builtin with the same structure as `g`, if any.
pub(crate) fn identify(g: &GraphPresentation) -> Option<&'static str> {
    TABLE
        .iter()
        .map(|(n, _)| *n)
        .find(|n| builtin(n).map(|b| b.same_structure(g)).unwrap_or(false))
}
