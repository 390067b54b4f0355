"""idiomatch: identify idioms in corpora, extract their collocations,
train idiom-aware embeddings, and reverse-search idioms by meaning."""

__version__ = "0.1.0"
