//! Text formats: follower lists, creation indexes, edge dumps and truth files.
//!
//! All formats are LF-terminated UTF-8. Blank lines and lines starting with
//! `#` are ignored on input.

use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use tempograph_core::{CreationIndex, FollowerList, NodeId, TemporalEdgeList, TimeUnit, TimedEdge};

/// A malformed input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataError {
    pub path: Option<PathBuf>,
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl DataError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        DataError { path: None, line, message: message.into() }
    }

    fn in_file(mut self, path: &Path) -> Self {
        self.path = Some(path.to_path_buf());
        self
    }
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.path {
            write!(f, "{}:", p.display())?;
        }
        if self.line > 0 {
            write!(f, "line {}: ", self.line)?;
        } else if self.path.is_some() {
            f.write_str(" ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for DataError {}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Data(#[from] DataError),
}

fn open(path: &Path) -> Result<BufReader<File>, ReadError> {
    File::open(path).map(BufReader::new).map_err(|source| ReadError::Io { path: path.to_path_buf(), source })
}

fn tag_path<T>(path: &Path, r: Result<T, ReadError>) -> Result<T, ReadError> {
    r.map_err(|e| match e {
        ReadError::Data(d) => ReadError::Data(d.in_file(path)),
        other => other,
    })
}

/// Content lines with their 1-based numbers.
fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String), ReadError>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(ReadError::Data(DataError::new(i + 1, format!("unreadable line: {e}"))))),
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, t.to_string())))
            }
        }
    })
}

fn parse_id(s: &str, line: usize) -> Result<NodeId, DataError> {
    s.trim().parse::<u64>().map(NodeId).map_err(|_| DataError::new(line, format!("invalid node id {:?}", s.trim())))
}

fn parse_u64(s: &str, what: &str, line: usize) -> Result<u64, DataError> {
    s.trim().parse::<u64>().map_err(|_| DataError::new(line, format!("invalid {what} {:?}", s.trim())))
}

/// Reads `target:U1,U2,...` lines. With `newest_first` each list is
/// reversed after parsing.
pub fn read_follower_lists<R: BufRead>(reader: R, newest_first: bool) -> Result<Vec<FollowerList>, ReadError> {
    let mut lists = Vec::new();
    let mut targets = BTreeSet::new();
    for item in content_lines(reader) {
        let (n, line) = item?;
        let (target, rest) =
            line.split_once(':').ok_or_else(|| DataError::new(n, "expected `target:follower,follower,...`"))?;
        let target = parse_id(target, n)?;
        let mut followers = rest
            .split(',')
            .filter(|f| !f.trim().is_empty())
            .map(|f| parse_id(f, n))
            .collect::<Result<Vec<_>, _>>()?;
        if newest_first {
            followers.reverse();
        }
        let list = FollowerList::new(target, followers);
        list.validate().map_err(|e| DataError::new(n, e.to_string()))?;
        if !targets.insert(target) {
            return Err(DataError::new(n, format!("second list for target {target}")).into());
        }
        lists.push(list);
    }
    Ok(lists)
}

pub fn load_follower_lists(path: &Path, newest_first: bool) -> Result<Vec<FollowerList>, ReadError> {
    tag_path(path, read_follower_lists(open(path)?, newest_first))
}

/// Reads `id<TAB>timestamp` lines.
pub fn read_creation_index<R: BufRead>(reader: R, unit: TimeUnit) -> Result<CreationIndex, ReadError> {
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    for item in content_lines(reader) {
        let (n, line) = item?;
        let (id, ts) = line.split_once('\t').ok_or_else(|| DataError::new(n, "expected `id<TAB>timestamp`"))?;
        let id = parse_id(id, n)?;
        if !seen.insert(id) {
            return Err(DataError::new(n, format!("duplicate id {id}")).into());
        }
        pairs.push((id, parse_u64(ts, "timestamp", n)?));
    }
    Ok(CreationIndex::from_pairs(pairs, unit))
}

pub fn load_creation_index(path: &Path, unit: TimeUnit) -> Result<CreationIndex, ReadError> {
    tag_path(path, read_creation_index(open(path)?, unit))
}

/// Reads `src<TAB>dst<TAB>est_time` lines. A missing time column reads as
/// time 0. Line order supplies `seq`, which is then renumbered to the
/// position in the normalized list.
pub fn read_edge_dump<R: BufRead>(reader: R) -> Result<TemporalEdgeList, ReadError> {
    let mut edges = Vec::new();
    for item in content_lines(reader) {
        let (n, line) = item?;
        let cols: Vec<&str> = line.split('\t').collect();
        let est_time = match cols.len() {
            2 => 0,
            3 => parse_u64(cols[2], "time", n)?,
            k => return Err(DataError::new(n, format!("expected 2 or 3 tab-separated columns, found {k}")).into()),
        };
        edges.push(TimedEdge { src: parse_id(cols[0], n)?, dst: parse_id(cols[1], n)?, est_time, seq: edges.len() as u64 });
    }
    let (list, _) = TemporalEdgeList::new(edges).map_err(|e| DataError::new(0, e.to_string()))?;
    Ok(list.renumbered())
}

pub fn load_edge_dump(path: &Path) -> Result<TemporalEdgeList, ReadError> {
    tag_path(path, read_edge_dump(open(path)?))
}

pub fn write_edges<W: Write>(mut w: W, edges: &[TimedEdge]) -> io::Result<()> {
    for e in edges {
        writeln!(w, "{}\t{}\t{}", e.src, e.dst, e.est_time)?;
    }
    w.flush()
}

/// Edge dump; also used for truth files, whose third column is the true time.
pub fn write_edge_dump<W: Write>(w: W, list: &TemporalEdgeList) -> io::Result<()> {
    write_edges(w, list.edges())
}

pub fn write_follower_lists<W: Write>(mut w: W, lists: &[FollowerList]) -> io::Result<()> {
    for l in lists {
        write!(w, "{}:", l.target)?;
        for (i, f) in l.followers.iter().enumerate() {
            if i > 0 {
                w.write_all(b",")?;
            }
            write!(w, "{f}")?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn write_creation_index<W: Write>(mut w: W, idx: &CreationIndex) -> io::Result<()> {
    for (id, t) in idx.entries() {
        writeln!(w, "{id}\t{t}")?;
    }
    w.flush()
}

/// Buffered writer to a file, or stdout for `None` and `-`.
pub fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => Ok(Box::new(BufWriter::new(File::create(p)?))),
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempograph_core::inference::infer_edge_times;

    #[test]
    fn follower_list_example() {
        let lists = read_follower_lists("# comment\n100:5,2,9\n\n".as_bytes(), false).unwrap();
        let edges = infer_edge_times(&lists, &CreationIndex::identity()).unwrap();
        let mut out = Vec::new();
        write_edge_dump(&mut out, &edges).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "5\t100\t5\n2\t100\t5\n9\t100\t9\n");
    }

    #[test]
    fn newest_first_reverses() {
        let lists = read_follower_lists("1:9,2,5\n".as_bytes(), true).unwrap();
        assert_eq!(lists[0].followers, vec![NodeId(5), NodeId(2), NodeId(9)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = read_follower_lists("1:2,3\n\n4:9,1,1\n".as_bytes(), false).unwrap_err();
        match err {
            ReadError::Data(d) => {
                assert_eq!(d.line, 3);
                assert!(d.message.contains("duplicate follower id 1"), "{}", d.message);
            }
            other => panic!("{other}"),
        }
        let err = read_creation_index("1\t5\nx\t7\n".as_bytes(), TimeUnit::Rank).unwrap_err();
        assert!(err.to_string().starts_with("line 2:"), "{err}");
        let err = read_edge_dump("1\t2\t3\t4\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn dump_round_trip() {
        let lists = read_follower_lists("10:4,7,1\n11:7,4\n12:1,11,10\n".as_bytes(), false).unwrap();
        let edges = infer_edge_times(&lists, &CreationIndex::identity()).unwrap();
        let mut out = Vec::new();
        write_edge_dump(&mut out, &edges).unwrap();
        assert_eq!(read_edge_dump(out.as_slice()).unwrap(), edges);
    }

    #[test]
    fn index_and_lists_round_trip() {
        let idx = read_creation_index("3\t30\n1\t10\n".as_bytes(), TimeUnit::EpochSeconds).unwrap();
        let mut out = Vec::new();
        write_creation_index(&mut out, &idx).unwrap();
        assert_eq!(read_creation_index(out.as_slice(), TimeUnit::EpochSeconds).unwrap(), idx);

        let lists = vec![FollowerList::new(NodeId(1), vec![NodeId(3), NodeId(2)]), FollowerList::new(NodeId(2), vec![])];
        let mut out = Vec::new();
        write_follower_lists(&mut out, &lists).unwrap();
        assert_eq!(read_follower_lists(out.as_slice(), false).unwrap(), lists);
    }
}
