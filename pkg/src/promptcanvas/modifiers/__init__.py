from .corpus import ModifierCorpus, ModifierEntry, score_modifiers
from .menus import ModifierMenu, aggregate_cluster, image_menu

__all__ = [
    "ModifierCorpus",
    "ModifierEntry",
    "score_modifiers",
    "ModifierMenu",
    "aggregate_cluster",
    "image_menu",
]
