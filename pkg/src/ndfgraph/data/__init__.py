"""Small bundled edge lists (karate club, Florentine families, Les Miserables)."""
