/// Size caps applied by the combinatorial operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest generator count accepted by prime enumeration.
    pub max_prime_generators: usize,
    /// Largest number of lattice points in a congruence oracle box.
    pub oracle_cells: u64,
    /// Largest fundamental parallelepiped volume enumerated for Hilbert bases.
    pub parallelepiped_volume: u64,
    /// Largest ambient rank for cone computations.
    pub max_ambient_rank: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_prime_generators: 24,
            oracle_cells: 1_000_000,
            parallelepiped_volume: 1_000_000,
            max_ambient_rank: 12,
        }
    }
}
