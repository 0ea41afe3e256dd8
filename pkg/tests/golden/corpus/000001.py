box_0 = Box(position=(953.5, 195, 489), size=(1901, 384, 972), rotation=0)
model_0 = Model(id="M-BB01", box=box_0, N=6, NKA=290, NKB=312, NKC=300, NKD=285, NKE=296, NKF=292, DBXX=1)
box_1 = Box(position=(320, 195, 489), size=(18, 384, 936), rotation=0)
model_1 = Model(id="M-SIDE", box=box_1)
box_2 = Box(position=(650, 195, 489), size=(18, 384, 936), rotation=0)
model_2 = Model(id="M-SIDE", box=box_2)
box_3 = Box(position=(968, 195, 489), size=(18, 384, 936), rotation=0)
model_3 = Model(id="M-SIDE", box=box_3)
box_4 = Box(position=(1271, 195, 489), size=(18, 384, 936), rotation=0)
model_4 = Model(id="M-SIDE", box=box_4)
box_5 = Box(position=(1585, 195, 489), size=(18, 384, 936), rotation=0)
model_5 = Model(id="M-SIDE", box=box_5)
box_6 = Box(position=(166, 195, 498), size=(290, 348, 18), rotation=0)
model_6 = Model(id="M-SHFX", box=box_6)
box_7 = Box(position=(485, 186, 255), size=(312, 366, 468), rotation=0)
model_7 = Model(id="M-DRAW", box=box_7, DH=400)
box_8 = Box(position=(485, 186, 723), size=(312, 366, 468), rotation=0)
model_8 = Model(id="M-DRAW", box=box_8, DH=400)
box_9 = Box(position=(809, 186, 255), size=(300, 366, 468), rotation=0)
model_9 = Model(id="M-DRAW", box=box_9, DH=400)
box_10 = Box(position=(809, 186, 723), size=(300, 366, 468), rotation=0)
model_10 = Model(id="M-DRAW", box=box_10, DH=400)
box_11 = Box(position=(1119.5, 12, 489), size=(285, 18, 936), rotation=0)
model_11 = Model(id="M-DOOR", box=box_11)
box_12 = Box(position=(1428, 12, 489), size=(296, 18, 936), rotation=0)
model_12 = Model(id="M-DOOR", box=box_12)
box_13 = Box(position=(1740, 195, 342), size=(292, 348, 18), rotation=0)
model_13 = Model(id="M-SHAD", box=box_13)
box_14 = Box(position=(1740, 195, 654), size=(292, 348, 18), rotation=0)
model_14 = Model(id="M-SHAD", box=box_14)
box_15 = Box(position=(1740, 12, 489), size=(292, 18, 936), rotation=0)
model_15 = Model(id="M-DOOR", box=box_15)
