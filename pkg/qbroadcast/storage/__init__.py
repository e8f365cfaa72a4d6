from .engine import ArtifactStore, dumps

__all__ = ['ArtifactStore', 'dumps']
