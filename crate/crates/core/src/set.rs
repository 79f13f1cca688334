use serde::{Deserialize, Serialize};

/// A subset of `[n]`, stored as a membership vector indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self { members: vec![false; n + 1], len: 0 }
    }

    pub fn full(n: usize) -> Self {
        let mut members = vec![true; n + 1];
        members[0] = false;
        Self { members, len: n }
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Size of the ground set.
    pub fn universe(&self) -> usize {
        self.members.len() - 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.universe()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    /// Returns true if `v` was newly inserted.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v >= 1 && v < self.members.len(), "vertex {v} out of range");
        if self.members[v] {
            false
        } else {
            self.members[v] = true;
            self.len += 1;
            true
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.iter().filter(|&v| other.contains(v)).count()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let vertices = Vec::<usize>::deserialize(deserializer)?;
        let n = vertices.iter().copied().max().unwrap_or(0);
        if vertices.contains(&0) {
            return Err(serde::de::Error::custom("vertex ids are 1-based"));
        }
        Ok(Self::from_vertices(n, vertices))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_query() {
        let mut s = VertexSet::empty(5);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(5));
        assert_eq!(s.len(), 2);
        assert!(s.contains(3) && !s.contains(1) && !s.contains(0) && !s.contains(9));
        assert_eq!(s.to_vec(), vec![3, 5]);
        assert!(VertexSet::full(4).is_full());
    }

    #[test]
    fn subset_and_intersection() {
        let a = VertexSet::from_vertices(6, [1, 2]);
        let b = VertexSet::from_vertices(6, [1, 2, 5]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(a.intersection_len(&b), 2);
    }
}
