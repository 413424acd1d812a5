//! A small in-process MapReduce executor.
//!
//! Records are split into contiguous partitions which a pool of worker
//! threads pulls from a shared queue. Each worker keeps its own emission
//! buffer; when the job has a combiner, emissions with equal keys are folded
//! together inside that buffer before anything crosses the shuffle. The
//! shuffle is a deterministic group-by, after which reducers run in parallel
//! over distinct groups.
//!
//! The output of [`Engine::run_job`] does not depend on the worker count,
//! the partition count or the scheduling order, provided the combiner is
//! commutative and associative and the reducer does not depend on the order
//! of its input values.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::Deref;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;

use crate::error::{Error, Result};

/// A contiguous slice of the dataset handled by one map task.
#[derive(Debug)]
pub struct Partition<'a, R> {
    pub id: usize,
    /// Index of the first record within the whole dataset.
    pub offset: usize,
    pub records: &'a [R],
}

// derive would require R: Clone
impl<R> Clone for Partition<'_, R> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<R> Copy for Partition<'_, R> {}

/// Splits `records` into `count` contiguous partitions whose sizes differ by
/// at most one. Trailing partitions may be empty.
pub fn partition<R>(records: &[R], count: usize) -> Vec<Partition<'_, R>> {
    let count = count.max(1);
    let base = records.len() / count;
    let extra = records.len() % count;
    let mut offset = 0;
    (0..count)
        .map(|id| {
            let len = base + usize::from(id < extra);
            let p = Partition { id, offset, records: &records[offset..offset + len] };
            offset += len;
            p
        })
        .collect()
}

static NEXT_BROADCAST: AtomicU64 = AtomicU64::new(0);

/// A read-only snapshot shared by every task of a job.
#[derive(Debug)]
pub struct Broadcast<T> {
    id: u64,
    payload: Arc<T>,
}

impl<T> Broadcast<T> {
    pub fn id(&self) -> u64 {
        self.id
    }
}

impl<T> Clone for Broadcast<T> {
    fn clone(&self) -> Self {
        Broadcast { id: self.id, payload: Arc::clone(&self.payload) }
    }
}

impl<T> Deref for Broadcast<T> {
    type Target = T;

    fn deref(&self) -> &T {
        &self.payload
    }
}

/// Freezes `value` into a broadcast variable.
pub fn broadcast<T>(value: T) -> Broadcast<T> {
    Broadcast { id: NEXT_BROADCAST.fetch_add(1, Ordering::Relaxed), payload: Arc::new(value) }
}

type MapFn<'a, R, K, V> = Box<dyn Fn(&R, &mut Emitter<'_, K, V>) -> Result<()> + Sync + 'a>;
type CombineFn<'a, V> = dyn Fn(&mut V, V) -> Result<()> + Sync + 'a;
type GroupFn<'a, K, G> = Box<dyn Fn(&K) -> G + Sync + 'a>;
type ReduceFn<'a, K, V, G, O> = Box<dyn Fn(&G, Vec<(K, V)>) -> Result<O> + Sync + 'a>;
type SizeFn<'a, K, V> = Box<dyn Fn(&K, &V) -> usize + Sync + 'a>;

/// The user-supplied parts of a MapReduce job.
///
/// Emission keys `K` are what the combiner folds on. Reducers are invoked
/// once per group `G = grouping(K)`; for plain jobs built with
/// [`JobSpec::new`] the grouping is the identity.
pub struct JobSpec<'a, R, K, V, G, O> {
    mapper: MapFn<'a, R, K, V>,
    combiner: Option<Box<CombineFn<'a, V>>>,
    grouping: GroupFn<'a, K, G>,
    reducer: ReduceFn<'a, K, V, G, O>,
    sizer: SizeFn<'a, K, V>,
}

impl<'a, R, K, V, O> JobSpec<'a, R, K, V, K, O>
where
    K: Clone + 'a,
    V: 'a,
{
    pub fn new(
        mapper: impl Fn(&R, &mut Emitter<'_, K, V>) -> Result<()> + Sync + 'a,
        reducer: impl Fn(&K, Vec<V>) -> Result<O> + Sync + 'a,
    ) -> Self {
        JobSpec::grouped(mapper, K::clone, move |key, values| {
            reducer(key, values.into_iter().map(|(_, v)| v).collect())
        })
    }
}

impl<'a, R, K, V, G, O> JobSpec<'a, R, K, V, G, O>
where
    V: 'a,
    K: 'a,
{
    /// A job whose reducer sees every emission whose key maps to the same
    /// group, keys included.
    pub fn grouped(
        mapper: impl Fn(&R, &mut Emitter<'_, K, V>) -> Result<()> + Sync + 'a,
        grouping: impl Fn(&K) -> G + Sync + 'a,
        reducer: impl Fn(&G, Vec<(K, V)>) -> Result<O> + Sync + 'a,
    ) -> Self {
        JobSpec {
            mapper: Box::new(mapper),
            combiner: None,
            grouping: Box::new(grouping),
            reducer: Box::new(reducer),
            sizer: Box::new(|_, _| std::mem::size_of::<K>() + std::mem::size_of::<V>()),
        }
    }

    /// Folds emissions with equal keys on the worker before the shuffle.
    /// Must be commutative and associative.
    pub fn with_combiner(mut self, combiner: impl Fn(&mut V, V) -> Result<()> + Sync + 'a) -> Self {
        self.combiner = Some(Box::new(combiner));
        self
    }

    pub fn without_combiner(mut self) -> Self {
        self.combiner = None;
        self
    }

    pub fn has_combiner(&self) -> bool {
        self.combiner.is_some()
    }

    /// Serialized size of one emission, used for the bytes-shuffled counter.
    pub fn with_size_estimate(mut self, sizer: impl Fn(&K, &V) -> usize + Sync + 'a) -> Self {
        self.sizer = Box::new(sizer);
        self
    }
}

enum Buffer<K, V> {
    Raw(Vec<(K, V)>),
    Combined(HashMap<K, V>),
}

/// Collects the emissions of the map tasks run by one worker.
pub struct Emitter<'j, K, V> {
    buffer: Buffer<K, V>,
    combiner: Option<&'j CombineFn<'j, V>>,
    emitted: u64,
}

impl<'j, K: Hash + Eq, V> Emitter<'j, K, V> {
    fn new(combiner: Option<&'j CombineFn<'j, V>>) -> Self {
        let buffer = if combiner.is_some() { Buffer::Combined(HashMap::new()) } else { Buffer::Raw(Vec::new()) };
        Emitter { buffer, combiner, emitted: 0 }
    }

    #[inline]
    pub fn emit(&mut self, key: K, value: V) -> Result<()> {
        self.emitted += 1;
        match &mut self.buffer {
            Buffer::Raw(out) => out.push((key, value)),
            Buffer::Combined(map) => {
                use std::collections::hash_map::Entry;
                match map.entry(key) {
                    Entry::Occupied(mut acc) => {
                        // combiner is always set for a Combined buffer
                        (self.combiner.unwrap())(acc.get_mut(), value)?;
                    }
                    Entry::Vacant(slot) => {
                        slot.insert(value);
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of emissions seen so far, before combining.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }
}

/// Counters collected while running a job.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct JobStats {
    pub records: u64,
    /// Emissions produced by the mappers.
    pub emitted: u64,
    /// Values that crossed the shuffle (after combining).
    pub shuffled: u64,
    pub bytes_shuffled: u64,
    pub groups: u64,
}

#[derive(Debug)]
pub struct JobOutput<G, O> {
    pub results: BTreeMap<G, O>,
    pub stats: JobStats,
}

#[derive(Debug)]
pub struct MapOutput<T> {
    pub outputs: Vec<T>,
    pub stats: JobStats,
}

/// Executor configuration: how many workers, how many partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engine {
    workers: usize,
    partitions: Option<usize>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { workers: 1, partitions: None }
    }
}

impl Engine {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::invalid("at least one worker is required"));
        }
        Ok(Engine { workers, partitions: None })
    }

    /// Overrides the default of four partitions per worker.
    pub fn with_partitions(mut self, partitions: usize) -> Result<Self> {
        if partitions == 0 {
            return Err(Error::invalid("at least one partition is required"));
        }
        self.partitions = Some(partitions);
        Ok(self)
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn partition_count(&self) -> usize {
        self.partitions.unwrap_or(4 * self.workers)
    }

    /// Runs map, optional combine, shuffle and reduce over `records`.
    pub fn run_job<R, K, V, G, O>(&self, records: &[R], job: &JobSpec<'_, R, K, V, G, O>) -> Result<JobOutput<G, O>>
    where
        R: Sync,
        K: Hash + Eq + Ord + Send,
        V: Send,
        G: Ord + Debug + Send,
        O: Send,
    {
        let parts = partition(records, self.partition_count());
        let combiner = job.combiner.as_deref();

        let buffers = self.run_map_phase(&parts, |worker_parts| {
            let mut chunks = Vec::new();
            let mut emitter = Emitter::new(combiner);
            for part in worker_parts {
                let mut local = Emitter::new(None);
                let out = if combiner.is_some() { &mut emitter } else { &mut local };
                for (i, record) in part.records.iter().enumerate() {
                    (job.mapper)(record, out).map_err(|e| Error::Map {
                        partition: part.id,
                        record: part.offset + i,
                        source: Box::new(e),
                    })?;
                }
                if combiner.is_none() {
                    chunks.push((part.id, local));
                }
            }
            if combiner.is_some() {
                chunks.push((usize::MAX, emitter));
            }
            Ok(chunks)
        })?;

        let mut stats = JobStats { records: records.len() as u64, ..JobStats::default() };
        let mut chunks: Vec<(usize, Emitter<'_, K, V>)> = buffers.into_iter().flatten().collect();
        chunks.sort_by_key(|(id, _)| *id);

        let mut groups: BTreeMap<G, Vec<(K, V)>> = BTreeMap::new();
        for (_, emitter) in chunks {
            stats.emitted += emitter.emitted;
            let pairs: Vec<(K, V)> = match emitter.buffer {
                Buffer::Raw(v) => v,
                Buffer::Combined(map) => {
                    let mut v: Vec<_> = map.into_iter().collect();
                    v.sort_by(|a, b| a.0.cmp(&b.0));
                    v
                }
            };
            for (k, v) in pairs {
                stats.shuffled += 1;
                stats.bytes_shuffled += (job.sizer)(&k, &v) as u64;
                groups.entry((job.grouping)(&k)).or_default().push((k, v));
            }
        }
        stats.groups = groups.len() as u64;

        let groups: Vec<(G, Vec<(K, V)>)> = groups.into_iter().collect();
        let results = self.run_reduce_phase(groups, &job.reducer)?;
        Ok(JobOutput { results, stats })
    }

    /// Runs a job consisting of the map step only. The mapper may drop a
    /// record by returning `None`. Outputs come back in dataset order.
    pub fn map_only<R, T, F>(&self, records: &[R], mapper: F) -> Result<MapOutput<T>>
    where
        R: Sync,
        T: Send,
        F: Fn(&R) -> Result<Option<T>> + Sync,
    {
        let parts = partition(records, self.partition_count());
        let buffers = self.run_map_phase(&parts, |worker_parts| {
            let mut chunks = Vec::new();
            for part in worker_parts {
                let mut out = Vec::new();
                for (i, record) in part.records.iter().enumerate() {
                    let mapped = mapper(record).map_err(|e| Error::Map {
                        partition: part.id,
                        record: part.offset + i,
                        source: Box::new(e),
                    })?;
                    out.extend(mapped);
                }
                chunks.push((part.id, out));
            }
            Ok(chunks)
        })?;
        let mut chunks: Vec<(usize, Vec<T>)> = buffers.into_iter().flatten().collect();
        chunks.sort_by_key(|(id, _)| *id);
        let outputs: Vec<T> = chunks.into_iter().flat_map(|(_, v)| v).collect();
        let stats = JobStats {
            records: records.len() as u64,
            emitted: outputs.len() as u64,
            ..JobStats::default()
        };
        Ok(MapOutput { outputs, stats })
    }

    /// Hands partitions to workers from a shared queue. `task` receives an
    /// iterator over the partitions that worker claimed and returns that
    /// worker's buffered output.
    fn run_map_phase<'p, R, B, F>(&self, parts: &[Partition<'p, R>], task: F) -> Result<Vec<B>>
    where
        R: Sync,
        B: Send,
        F: Fn(&mut dyn Iterator<Item = Partition<'p, R>>) -> Result<B> + Sync,
    {
        let next = AtomicUsize::new(0);
        let failed = AtomicBool::new(false);
        let claim = || {
            std::iter::from_fn(|| {
                if failed.load(Ordering::Relaxed) {
                    return None;
                }
                parts.get(next.fetch_add(1, Ordering::Relaxed)).copied()
            })
        };
        let run = || {
            let out = task(&mut claim());
            if out.is_err() {
                failed.store(true, Ordering::Relaxed);
            }
            out
        };

        let workers = self.workers.min(parts.len()).max(1);
        let results: Vec<Result<B>> = if workers == 1 {
            vec![run()]
        } else {
            thread::scope(|s| {
                let handles: Vec<_> = (0..workers).map(|_| s.spawn(run)).collect();
                handles.into_iter().map(|h| h.join().expect("map worker panicked")).collect()
            })
        };
        collect_first_error(results)
    }

    fn run_reduce_phase<K, V, G, O>(
        &self,
        groups: Vec<(G, Vec<(K, V)>)>,
        reducer: &ReduceFn<'_, K, V, G, O>,
    ) -> Result<BTreeMap<G, O>>
    where
        K: Send,
        V: Send,
        G: Ord + Debug + Send,
        O: Send,
    {
        let reduce_one = |(group, values): (G, Vec<(K, V)>)| -> Result<(G, O)> {
            let out = reducer(&group, values).map_err(|e| Error::Reduce {
                key: format!("{group:?}"),
                source: Box::new(e),
            })?;
            Ok((group, out))
        };

        let workers = self.workers.min(groups.len()).max(1);
        if workers == 1 {
            return groups.into_iter().map(reduce_one).collect();
        }
        let chunk = groups.len().div_ceil(workers);
        let mut slices: Vec<Vec<(G, Vec<(K, V)>)>> = Vec::with_capacity(workers);
        let mut rest = groups;
        while !rest.is_empty() {
            let tail = rest.split_off(chunk.min(rest.len()));
            slices.push(rest);
            rest = tail;
        }
        let results: Vec<Result<Vec<(G, O)>>> = thread::scope(|s| {
            let handles: Vec<_> = slices
                .into_iter()
                .map(|slice| s.spawn(|| slice.into_iter().map(reduce_one).collect::<Result<Vec<_>>>()))
                .collect();
            handles.into_iter().map(|h| h.join().expect("reduce worker panicked")).collect()
        });
        Ok(collect_first_error(results)?.into_iter().flatten().collect())
    }
}

/// Keeps the lowest-positioned map failure so error reports do not depend
/// on which worker hit its record first.
fn collect_first_error<B>(results: Vec<Result<B>>) -> Result<Vec<B>> {
    let mut ok = Vec::with_capacity(results.len());
    let mut first: Option<Error> = None;
    for r in results {
        match r {
            Ok(b) => ok.push(b),
            Err(e) => {
                let replace = match (&first, &e) {
                    (None, _) => true,
                    (Some(Error::Map { partition: p0, record: r0, .. }), Error::Map { partition, record, .. }) => {
                        (partition, record) < (p0, r0)
                    }
                    _ => false,
                };
                if replace {
                    first = Some(e);
                }
            }
        }
    }
    match first {
        Some(e) => Err(e),
        None => Ok(ok),
    }
}
